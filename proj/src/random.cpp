#include "linklab/random.hpp"

#include <bit>
#include <cmath>

namespace linklab {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t Seed::key() const {
    std::uint64_t state = master;
    std::uint64_t h = splitmix64(state);
    for (std::uint64_t label : {experiment, snr_index, csi_index, trial_index,
                                static_cast<std::uint64_t>(stream)}) {
        state = h ^ (label * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
        h = splitmix64(state);
    }
    return h;
}

Rng::Rng(const Seed& seed) {
    std::uint64_t state = seed.key();
    for (auto& word : s_) {
        word = splitmix64(state);
    }
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

Complex Rng::complex_gaussian(double variance) {
    const double sd = std::sqrt(variance / 2.0);
    const double re = gaussian();
    const double im = gaussian();
    return {sd * re, sd * im};
}

}  // namespace linklab
