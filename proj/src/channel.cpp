#include "linklab/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace linklab {

CsiModel CsiModel::noisy(double variance) {
    if (variance < 0.0) {
        throw std::invalid_argument("CSI error variance must be >= 0");
    }
    if (variance == 0.0) {
        return perfect();
    }
    return {Kind::noisy, variance};
}

ChannelTaps draw_rayleigh_taps(const Seed& seed, std::size_t taps) {
    if (taps == 0) {
        throw std::invalid_argument("draw_rayleigh_taps: need at least one tap");
    }
    Rng rng(seed);
    const double p = 1.0 / static_cast<double>(taps);
    ChannelTaps out;
    out.power_profile.assign(taps, p);
    out.taps.reserve(taps);
    for (std::size_t l = 0; l < taps; ++l) {
        out.taps.push_back(rng.complex_gaussian(p));
    }
    return out;
}

MimoFlatChannel draw_mimo_flat_channel(const Seed& seed, std::size_t n_units) {
    if (n_units == 0) {
        throw std::invalid_argument("draw_mimo_flat_channel: need at least one unit");
    }
    Rng rng(seed);
    MimoFlatChannel out;
    out.units.reserve(n_units);
    for (std::size_t u = 0; u < n_units; ++u) {
        Matrix2x2 m;
        m.h11 = rng.complex_gaussian(1.0);
        m.h12 = rng.complex_gaussian(1.0);
        m.h21 = rng.complex_gaussian(1.0);
        m.h22 = rng.complex_gaussian(1.0);
        out.units.push_back(m);
    }
    return out;
}

ComplexVector apply_fir_channel(std::span<const Complex> x, const ChannelTaps& channel) {
    ComplexVector y(x.size());
    const auto& h = channel.taps;
    for (std::size_t n = 0; n < x.size(); ++n) {
        Complex acc{};
        const std::size_t lmax = std::min(h.size(), n + 1);
        for (std::size_t l = 0; l < lmax; ++l) {
            acc += h[l] * x[n - l];
        }
        y[n] = acc;
    }
    return y;
}

ComplexVector add_awgn(std::span<const Complex> x, double sigma2, const Seed& seed) {
    if (sigma2 < 0.0) {
        throw std::invalid_argument("add_awgn: negative noise variance");
    }
    ComplexVector y(x.begin(), x.end());
    if (sigma2 == 0.0) {
        return y;
    }
    Rng rng(seed);
    for (auto& v : y) {
        v += rng.complex_gaussian(sigma2);
    }
    return y;
}

double snr_to_noise_variance(double snr_db, double es) {
    if (!(es > 0.0)) {
        throw std::invalid_argument("snr_to_noise_variance: symbol energy must be positive");
    }
    return es * std::pow(10.0, -snr_db / 10.0);
}

NoiseConfig make_noise_config(double snr_db, double es) {
    return {snr_db, snr_to_noise_variance(snr_db, es)};
}

MimoFlatChannel corrupt_csi(const MimoFlatChannel& h, const CsiModel& model, const Seed& seed) {
    if (model.error_variance < 0.0) {
        throw std::invalid_argument("corrupt_csi: negative error variance");
    }
    if (model.kind == CsiModel::Kind::perfect || model.error_variance == 0.0) {
        return h;
    }
    Rng rng(seed);
    MimoFlatChannel out = h;
    const double v = model.error_variance;
    for (auto& m : out.units) {
        m.h11 += rng.complex_gaussian(v);
        m.h12 += rng.complex_gaussian(v);
        m.h21 += rng.complex_gaussian(v);
        m.h22 += rng.complex_gaussian(v);
    }
    return out;
}

ComplexVector corrupt_csi(std::span<const Complex> h, const CsiModel& model, const Seed& seed) {
    if (model.error_variance < 0.0) {
        throw std::invalid_argument("corrupt_csi: negative error variance");
    }
    if (model.kind == CsiModel::Kind::perfect || model.error_variance == 0.0) {
        return {h.begin(), h.end()};
    }
    return add_awgn(h, model.error_variance, seed);
}

}  // namespace linklab
