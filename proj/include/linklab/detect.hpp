#pragma once

#include <string_view>

#include "linklab/numerics.hpp"
#include "linklab/spacecode.hpp"

namespace linklab {

/// y = H s + n with H of shape m x n, m >= n.
struct LinearSystem {
    CMatrix h;
    ComplexVector y;
    double sigma2 = 0.0;
};

enum class DetectorKind { ls, mmse };

std::string_view to_string(DetectorKind kind);
DetectorKind detector_from_string(std::string_view name);

/// Ratio of smallest to largest singular value below which ls_detect refuses
/// to solve.
inline constexpr double kRankGuard = 1e-10;

/// Solves A x = b by Gaussian elimination with partial pivoting. A square.
ComplexVector solve_linear(CMatrix a, ComplexVector b);

/// Smallest / largest singular value of h (0 for an all-zero matrix).
double inverse_condition(const CMatrix& h);

/// Least squares / zero forcing: (H^H H)^{-1} H^H y.
/// Throws SingularMatrixError when inverse_condition(H) <= kRankGuard.
ComplexVector ls_detect(const LinearSystem& sys);

/// (H^H H + sigma2 I)^{-1} H^H y. Throws std::invalid_argument for sigma2 < 0.
ComplexVector mmse_detect(const LinearSystem& sys);

ComplexVector detect(const LinearSystem& sys, DetectorKind kind);

/// Builds the stacked effective channel from the channel estimate and runs the
/// chosen detector on it.
SymbolPair detect_alamouti(const ReceivedBlock& rx, const Matrix2x2& h_hat, double sigma2, DetectorKind kind);

}  // namespace linklab
