#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linklab/numerics.hpp"

namespace linklab {

struct OfdmConfig {
    std::size_t nfft = 512;
    std::size_t cp_len = 10;
    std::size_t n_blocks = 1;

    std::size_t block_len() const { return nfft + cp_len; }
    std::size_t frame_len() const { return block_len() * n_blocks; }

    /// Throws std::invalid_argument unless nfft is a power of two >= 2,
    /// cp_len < nfft and n_blocks >= 1.
    void validate() const;

    /// Throws std::invalid_argument when the prefix cannot absorb a channel
    /// with the given number of taps (cp_len < taps - 1).
    void validate_channel(std::size_t channel_taps) const;
};

/// Per block: IFFT, then prepend the last cp_len samples.
ComplexVector ofdm_modulate(std::span<const Complex> symbols, const OfdmConfig& cfg);

/// Per block: drop the prefix, FFT.
ComplexVector ofdm_demodulate(std::span<const Complex> samples, const OfdmConfig& cfg);

/// H[k] = sum_l taps[l] exp(-j 2 pi k l / nfft). Non-unitary, so that
/// Y[k] = H[k] X[k] holds under the unitary fft/ifft pair.
ComplexVector channel_frequency_response(std::span<const Complex> taps, std::size_t nfft);

struct Equalized {
    ComplexVector symbols;
    /// Subcarrier indices whose |H| fell at or below the deep-fade guard;
    /// the corresponding symbol is set to zero.
    std::vector<std::size_t> faded;
};

inline constexpr double kDeepFadeGuard = 1e-12;

/// One-tap zero-forcing: X[k] = Y[k] / H[k]. H may be shorter than Y and is
/// then applied cyclically (one response shared by every OFDM block).
Equalized equalize_onetap(std::span<const Complex> y, std::span<const Complex> h);

}  // namespace linklab
