#include "linklab/spacecode.hpp"

namespace linklab {

AlamoutiBlock alamouti_encode(Complex x1, Complex x2) {
    AlamoutiBlock b;
    b.x1 = x1;
    b.x2 = x2;
    b.tx[0] = {x1, x2};
    b.tx[1] = {-std::conj(x2), std::conj(x1)};
    return b;
}

ReceivedBlock alamouti_receive(const AlamoutiBlock& block, const Matrix2x2& h, const BlockNoise& noise) {
    const auto& a = block.tx[0];
    const auto& b = block.tx[1];
    ReceivedBlock rx;
    rx.y1_a = h.h11 * a[0] + h.h12 * a[1] + noise[0];
    rx.y2_a = h.h21 * a[0] + h.h22 * a[1] + noise[1];
    rx.y1_b = h.h11 * b[0] + h.h12 * b[1] + noise[2];
    rx.y2_b = h.h21 * b[0] + h.h22 * b[1] + noise[3];
    return rx;
}

SymbolPair alamouti_combine_raw(const ReceivedBlock& rx, const Matrix2x2& h) {
    const Complex c1b = std::conj(rx.y1_b);
    const Complex c2b = std::conj(rx.y2_b);
    return {std::conj(h.h11) * rx.y1_a + h.h12 * c1b + std::conj(h.h21) * rx.y2_a + h.h22 * c2b,
            std::conj(h.h12) * rx.y1_a - h.h11 * c1b + std::conj(h.h22) * rx.y2_a - h.h21 * c2b};
}

SymbolPair alamouti_combine(const ReceivedBlock& rx, const Matrix2x2& h_hat) {
    const double energy = h_hat.frobenius_norm2();
    if (!(energy > 0.0)) {
        throw SingularMatrixError("alamouti_combine: channel estimate is zero");
    }
    const SymbolPair raw = alamouti_combine_raw(rx, h_hat);
    return {raw.x1 / energy, raw.x2 / energy};
}

EffectiveChannel build_effective_channel(const Matrix2x2& h, const ReceivedBlock& rx) {
    EffectiveChannel eff;
    eff.h = CMatrix(4, 2,
                    {h.h11, h.h12,                          //
                     std::conj(h.h12), -std::conj(h.h11),  //
                     h.h21, h.h22,                          //
                     std::conj(h.h22), -std::conj(h.h21)});
    eff.y = {rx.y1_a, std::conj(rx.y1_b), rx.y2_a, std::conj(rx.y2_b)};
    return eff;
}

std::vector<AlamoutiBlock> sfbc_pair_map(std::span<const Complex> symbols) {
    if (symbols.size() % 2 != 0) {
        throw SizeError("sfbc_pair_map: odd symbol count");
    }
    std::vector<AlamoutiBlock> blocks;
    blocks.reserve(symbols.size() / 2);
    for (std::size_t k = 0; k < symbols.size(); k += 2) {
        blocks.push_back(alamouti_encode(symbols[k], symbols[k + 1]));
    }
    return blocks;
}

ComplexVector sfbc_pair_unmap(std::span<const AlamoutiBlock> blocks) {
    ComplexVector symbols;
    symbols.reserve(2 * blocks.size());
    for (const auto& b : blocks) {
        symbols.push_back(b.x1);
        symbols.push_back(b.x2);
    }
    return symbols;
}

}  // namespace linklab
