#pragma once

#include <array>
#include <cstdint>

#include "linklab/numerics.hpp"

namespace linklab {

/// Purpose label for a substream; keeps bits, channel, noise and CSI error
/// draws of the same trial independent of each other.
enum class Stream : std::uint64_t {
    bits = 1,
    channel = 2,
    noise = 3,
    csi = 4,
    test = 99,
};

/// Master seed plus the labels that select an independent substream.
///
/// Two seeds with identical fields always produce identical sequences. The
/// substream key is a SplitMix64 chain over (master, experiment, snr_index,
/// csi_index, trial_index, stream); see README for the exact construction.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t experiment = 0;
    std::uint64_t snr_index = 0;
    std::uint64_t csi_index = 0;
    std::uint64_t trial_index = 0;
    Stream stream = Stream::test;

    Seed with_stream(Stream s) const {
        Seed out = *this;
        out.stream = s;
        return out;
    }
    Seed with_trial(std::uint64_t t) const {
        Seed out = *this;
        out.trial_index = t;
        return out;
    }

    std::uint64_t key() const;

    friend bool operator==(const Seed&, const Seed&) = default;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** generator, seeded from a Seed key through SplitMix64.
/// Gaussian variates use the polar Box-Muller method so that sequences do
/// not depend on a standard library's distribution implementation.
class Rng {
public:
    explicit Rng(const Seed& seed);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    double gaussian();
    /// Circularly-symmetric complex Gaussian CN(0, variance).
    Complex complex_gaussian(double variance);

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace linklab
