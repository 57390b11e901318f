#include "linklab/ofdm.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace linklab {

void OfdmConfig::validate() const {
    if (nfft < 2 || !is_power_of_two(nfft)) {
        throw std::invalid_argument("nfft must be a power of two >= 2, got " + std::to_string(nfft));
    }
    if (cp_len >= nfft) {
        throw std::invalid_argument("cyclic prefix length must be smaller than nfft");
    }
    if (n_blocks == 0) {
        throw std::invalid_argument("n_blocks must be >= 1");
    }
}

void OfdmConfig::validate_channel(std::size_t channel_taps) const {
    if (channel_taps == 0) {
        throw std::invalid_argument("channel must have at least one tap");
    }
    if (channel_taps > nfft) {
        throw std::invalid_argument("channel longer than nfft");
    }
    if (cp_len + 1 < channel_taps) {
        throw std::invalid_argument("cyclic prefix of " + std::to_string(cp_len) +
                                    " samples cannot absorb a " + std::to_string(channel_taps) +
                                    "-tap channel (need cp >= taps - 1)");
    }
}

ComplexVector ofdm_modulate(std::span<const Complex> symbols, const OfdmConfig& cfg) {
    cfg.validate();
    if (symbols.size() != cfg.nfft * cfg.n_blocks) {
        throw SizeError("ofdm_modulate: expected " + std::to_string(cfg.nfft * cfg.n_blocks) +
                        " symbols, got " + std::to_string(symbols.size()));
    }
    ComplexVector out;
    out.reserve(cfg.frame_len());
    for (std::size_t b = 0; b < cfg.n_blocks; ++b) {
        const ComplexVector time = ifft(symbols.subspan(b * cfg.nfft, cfg.nfft));
        out.insert(out.end(), time.end() - static_cast<std::ptrdiff_t>(cfg.cp_len), time.end());
        out.insert(out.end(), time.begin(), time.end());
    }
    return out;
}

ComplexVector ofdm_demodulate(std::span<const Complex> samples, const OfdmConfig& cfg) {
    cfg.validate();
    if (samples.size() != cfg.frame_len()) {
        throw SizeError("ofdm_demodulate: expected " + std::to_string(cfg.frame_len()) +
                        " samples, got " + std::to_string(samples.size()));
    }
    ComplexVector out;
    out.reserve(cfg.nfft * cfg.n_blocks);
    for (std::size_t b = 0; b < cfg.n_blocks; ++b) {
        const auto body = samples.subspan(b * cfg.block_len() + cfg.cp_len, cfg.nfft);
        const ComplexVector freq = fft(body);
        out.insert(out.end(), freq.begin(), freq.end());
    }
    return out;
}

ComplexVector channel_frequency_response(std::span<const Complex> taps, std::size_t nfft) {
    if (taps.size() > nfft) {
        throw SizeError("channel_frequency_response: more taps than subcarriers");
    }
    ComplexVector h(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
        Complex acc{};
        for (std::size_t l = 0; l < taps.size(); ++l) {
            const auto idx = static_cast<double>((k * l) % nfft);
            acc += taps[l] * std::polar(1.0, -2.0 * std::numbers::pi * idx / static_cast<double>(nfft));
        }
        h[k] = acc;
    }
    return h;
}

Equalized equalize_onetap(std::span<const Complex> y, std::span<const Complex> h) {
    if (h.empty() || y.size() % h.size() != 0) {
        throw SizeError("equalize_onetap: response length must divide observation length");
    }
    Equalized out;
    out.symbols.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const Complex hk = h[i % h.size()];
        if (std::abs(hk) <= kDeepFadeGuard) {
            out.symbols[i] = 0.0;
            out.faded.push_back(i);
        } else {
            out.symbols[i] = y[i] / hk;
        }
    }
    return out;
}

}  // namespace linklab
