#include "linklab/modem.hpp"

#include <numbers>

namespace linklab {

BitStream generate_bits(const Seed& seed, std::size_t n) {
    Rng rng(seed);
    BitStream bits(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) {
            word = rng.next_u64();
        }
        bits[i] = static_cast<Bit>(word & 1U);
        word >>= 1;
    }
    return bits;
}

ComplexVector qpsk_modulate(std::span<const Bit> bits) {
    if (bits.size() % 2 != 0) {
        throw SizeError("qpsk_modulate: odd number of bits");
    }
    constexpr double a = std::numbers::sqrt2 / 2.0;
    ComplexVector symbols(bits.size() / 2);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        symbols[k] = {bits[2 * k] ? -a : a, bits[2 * k + 1] ? -a : a};
    }
    return symbols;
}

BitStream qpsk_demodulate(std::span<const Complex> symbols) {
    BitStream bits(2 * symbols.size());
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        bits[2 * k] = symbols[k].real() < 0.0 ? 1 : 0;
        bits[2 * k + 1] = symbols[k].imag() < 0.0 ? 1 : 0;
    }
    return bits;
}

std::size_t count_bit_errors(std::span<const Bit> a, std::span<const Bit> b) {
    if (a.size() != b.size()) {
        throw SizeError("count_bit_errors: length mismatch");
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        errors += (a[i] != b[i]) ? 1 : 0;
    }
    return errors;
}

}  // namespace linklab
