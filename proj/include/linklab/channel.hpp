#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linklab/numerics.hpp"
#include "linklab/random.hpp"

namespace linklab {

/// Multipath FIR channel. power_profile[l] is the variance tap l is drawn
/// with; the profile sums to one.
struct ChannelTaps {
    ComplexVector taps;
    std::vector<double> power_profile;
};

/// One 2x2 flat channel per resource unit (an SFBC subcarrier pair).
struct MimoFlatChannel {
    std::vector<Matrix2x2> units;
};

struct NoiseConfig {
    double snr_db = 0.0;
    double sigma2 = 1.0;
};

struct CsiModel {
    enum class Kind { perfect, noisy };
    Kind kind = Kind::perfect;
    double error_variance = 0.0;

    static CsiModel perfect() { return {}; }
    /// A zero variance collapses to the perfect model.
    static CsiModel noisy(double variance);
};

/// iid CN(0, 1/L) taps (uniform power-delay profile).
ChannelTaps draw_rayleigh_taps(const Seed& seed, std::size_t taps);

/// iid CN(0, 1) entries for each of n_units 2x2 matrices.
MimoFlatChannel draw_mimo_flat_channel(const Seed& seed, std::size_t n_units);

/// Linear convolution truncated to len(x); the tail past the frame is dropped.
ComplexVector apply_fir_channel(std::span<const Complex> x, const ChannelTaps& channel);

/// y = x + n with n iid CN(0, sigma2). Throws std::invalid_argument for
/// negative sigma2.
ComplexVector add_awgn(std::span<const Complex> x, double sigma2, const Seed& seed);

/// sigma^2 = es * 10^(-snr_db / 10). Throws std::invalid_argument unless es > 0.
double snr_to_noise_variance(double snr_db, double es);

NoiseConfig make_noise_config(double snr_db, double es);

/// H_hat = H + E with E iid CN(0, model.error_variance). The perfect model
/// returns H unchanged.
MimoFlatChannel corrupt_csi(const MimoFlatChannel& h, const CsiModel& model, const Seed& seed);
ComplexVector corrupt_csi(std::span<const Complex> h, const CsiModel& model, const Seed& seed);

}  // namespace linklab
