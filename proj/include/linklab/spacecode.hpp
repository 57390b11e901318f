#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "linklab/numerics.hpp"

namespace linklab {

/// Alamouti codeword for the symbol pair (x1, x2).
///
///            antenna 1   antenna 2
///   slot A:     x1          x2
///   slot B:   -conj(x2)   conj(x1)
///
/// For STBC the slots are consecutive symbol periods; for SFBC they are
/// adjacent subcarriers.
struct AlamoutiBlock {
    Complex x1{};
    Complex x2{};
    /// tx[slot][antenna]
    std::array<std::array<Complex, 2>, 2> tx{};
};

/// Observations at receive antennas 1 and 2 in slots A and B.
struct ReceivedBlock {
    Complex y1_a{}, y2_a{};
    Complex y1_b{}, y2_b{};
};

/// Noise added to (y1_a, y2_a, y1_b, y2_b), in that order.
using BlockNoise = std::array<Complex, 4>;

/// Stacked form y = H_eff [x1; x2] + n of the Alamouti reception model:
///
///   H_eff = [ H11    H12   ]     y = [ y1_a       ]
///           [ H12*  -H11*  ]         [ conj(y1_b) ]
///           [ H21    H22   ]         [ y2_a       ]
///           [ H22*  -H21*  ]         [ conj(y2_b) ]
struct EffectiveChannel {
    CMatrix h;
    ComplexVector y;
};

struct SymbolPair {
    Complex x1{};
    Complex x2{};
};

AlamoutiBlock alamouti_encode(Complex x1, Complex x2);

/// y_i(A) = H_i1 tx[A][0] + H_i2 tx[A][1] + n, same for slot B.
ReceivedBlock alamouti_receive(const AlamoutiBlock& block, const Matrix2x2& h, const BlockNoise& noise = {});

/// Classical matched-filter combiner, normalized by ||H_hat||_F^2:
///   x1 ~ conj(H11) y1_a + H12 conj(y1_b) + conj(H21) y2_a + H22 conj(y2_b)
///   x2 ~ conj(H12) y1_a - H11 conj(y1_b) + conj(H22) y2_a - H21 conj(y2_b)
/// Throws SingularMatrixError for an all-zero channel.
SymbolPair alamouti_combine(const ReceivedBlock& rx, const Matrix2x2& h_hat);

/// Raw (unnormalized) combiner output; used to check the ||H||^2 x identity.
SymbolPair alamouti_combine_raw(const ReceivedBlock& rx, const Matrix2x2& h_hat);

EffectiveChannel build_effective_channel(const Matrix2x2& h_hat, const ReceivedBlock& rx);

/// Pairs (s[2k], s[2k+1]) into Alamouti block k. Throws SizeError on odd counts.
std::vector<AlamoutiBlock> sfbc_pair_map(std::span<const Complex> symbols);

/// Inverse of sfbc_pair_map.
ComplexVector sfbc_pair_unmap(std::span<const AlamoutiBlock> blocks);

}  // namespace linklab
