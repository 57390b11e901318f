#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "linklab/numerics.hpp"
#include "linklab/random.hpp"

namespace linklab {

using Bit = std::uint8_t;
using BitStream = std::vector<Bit>;

/// n pseudorandom bits from the substream selected by seed.
BitStream generate_bits(const Seed& seed, std::size_t n);

/// Gray-coded QPSK: bit pair (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
ComplexVector qpsk_modulate(std::span<const Bit> bits);

/// Hard sign decisions, b0 = Re < 0, b1 = Im < 0. A sample exactly on an
/// axis decides bit 0.
BitStream qpsk_demodulate(std::span<const Complex> symbols);

std::size_t count_bit_errors(std::span<const Bit> a, std::span<const Bit> b);

}  // namespace linklab
