#include "linklab/detect.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace linklab {

namespace {

void check_system(const LinearSystem& sys) {
    if (sys.h.rows() < sys.h.cols() || sys.h.cols() == 0) {
        throw SizeError("linear system must be tall or square with at least one column");
    }
    if (sys.y.size() != sys.h.rows()) {
        throw SizeError("observation length does not match channel rows");
    }
}

// Gram matrix H^H H plus diagonal loading, and the matched-filter output H^H y.
std::pair<CMatrix, ComplexVector> normal_equations(const LinearSystem& sys, double loading) {
    const std::size_t m = sys.h.rows();
    const std::size_t n = sys.h.cols();
    CMatrix gram(n, n);
    ComplexVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t r = 0; r < m; ++r) {
                acc += std::conj(sys.h(r, i)) * sys.h(r, j);
            }
            gram(i, j) = acc;
        }
        gram(i, i) += loading;
        Complex acc{};
        for (std::size_t r = 0; r < m; ++r) {
            acc += std::conj(sys.h(r, i)) * sys.y[r];
        }
        rhs[i] = acc;
    }
    return {std::move(gram), std::move(rhs)};
}

}  // namespace

std::string_view to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::ls:
            return "ls";
        case DetectorKind::mmse:
            return "mmse";
    }
    return "?";
}

DetectorKind detector_from_string(std::string_view name) {
    if (name == "ls") {
        return DetectorKind::ls;
    }
    if (name == "mmse") {
        return DetectorKind::mmse;
    }
    throw std::invalid_argument("unknown detector '" + std::string(name) + "'");
}

ComplexVector solve_linear(CMatrix a, ComplexVector b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) {
        throw SizeError("solve_linear: system must be square");
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) {
                pivot = r;
            }
        }
        if (a(pivot, col) == Complex{}) {
            throw SingularMatrixError("solve_linear: zero pivot");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(col, c), a(pivot, c));
            }
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = a(r, col) / a(col, col);
            if (f == Complex{}) {
                continue;
            }
            for (std::size_t c = col; c < n; ++c) {
                a(r, c) -= f * a(col, c);
            }
            b[r] -= f * b[col];
        }
    }
    ComplexVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Complex acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            acc -= a(i, c) * x[c];
        }
        x[i] = acc / a(i, i);
    }
    return x;
}

double inverse_condition(const CMatrix& h) {
    Eigen::MatrixXcd m(h.rows(), h.cols());
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = h(r, c);
        }
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return 0.0;
    }
    return s(s.size() - 1) / s(0);
}

ComplexVector ls_detect(const LinearSystem& sys) {
    check_system(sys);
    if (!(inverse_condition(sys.h) > kRankGuard)) {
        throw SingularMatrixError("ls_detect: channel matrix is rank deficient");
    }
    auto [gram, rhs] = normal_equations(sys, 0.0);
    return solve_linear(std::move(gram), std::move(rhs));
}

ComplexVector mmse_detect(const LinearSystem& sys) {
    check_system(sys);
    if (sys.sigma2 < 0.0) {
        throw std::invalid_argument("mmse_detect: negative noise variance");
    }
    auto [gram, rhs] = normal_equations(sys, sys.sigma2);
    return solve_linear(std::move(gram), std::move(rhs));
}

ComplexVector detect(const LinearSystem& sys, DetectorKind kind) {
    return kind == DetectorKind::ls ? ls_detect(sys) : mmse_detect(sys);
}

SymbolPair detect_alamouti(const ReceivedBlock& rx, const Matrix2x2& h_hat, double sigma2, DetectorKind kind) {
    EffectiveChannel eff = build_effective_channel(h_hat, rx);
    const ComplexVector s = detect(LinearSystem{std::move(eff.h), std::move(eff.y), sigma2}, kind);
    return {s[0], s[1]};
}

}  // namespace linklab
