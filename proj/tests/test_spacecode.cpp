#include <doctest.h>

#include <cmath>

#include "linklab/random.hpp"
#include "linklab/spacecode.hpp"

using namespace linklab;

namespace {

Matrix2x2 random_matrix(Rng& rng) {
    return {rng.complex_gaussian(1.0), rng.complex_gaussian(1.0), rng.complex_gaussian(1.0),
            rng.complex_gaussian(1.0)};
}

}  // namespace

TEST_CASE("Alamouti codeword") {
    const Complex j{0.0, 1.0};
    const auto b = alamouti_encode(1.0, j);
    CHECK(b.tx[0][0] == Complex{1.0});
    CHECK(b.tx[0][1] == j);
    CHECK(b.tx[1][0] == j);  // -conj(j)
    CHECK(b.tx[1][1] == Complex{1.0});

    Rng rng(Seed{.master = 1});
    for (int i = 0; i < 1000; ++i) {
        const Complex x1 = rng.complex_gaussian(1.0);
        const Complex x2 = rng.complex_gaussian(1.0);
        const auto c = alamouti_encode(x1, x2);
        // column1^H column2
        const Complex inner = std::conj(c.tx[0][0]) * c.tx[0][1] + std::conj(c.tx[1][0]) * c.tx[1][1];
        CHECK(inner == Complex{});
        double e = 0.0;
        for (const auto& row : c.tx) {
            for (const auto& v : row) {
                e += std::norm(v);
            }
        }
        CHECK(e == doctest::Approx(2.0 * (std::norm(x1) + std::norm(x2))));
    }
}

TEST_CASE("reception model") {
    const Complex x1{0.5, -1.0};
    const Complex x2{-2.0, 0.25};
    const auto rx = alamouti_receive(alamouti_encode(x1, x2), Matrix2x2::identity());
    CHECK(rx.y1_a == x1);
    CHECK(rx.y2_a == x2);
    CHECK(rx.y1_b == -std::conj(x2));
    CHECK(rx.y2_b == std::conj(x1));

    const BlockNoise n{Complex{1, 2}, Complex{3, 4}, Complex{5, 6}, Complex{7, 8}};
    Rng rng(Seed{.master = 2});
    const auto h = random_matrix(rng);
    const auto zero = alamouti_receive(alamouti_encode(0.0, 0.0), h, n);
    CHECK(zero.y1_a == n[0]);
    CHECK(zero.y2_a == n[1]);
    CHECK(zero.y1_b == n[2]);
    CHECK(zero.y2_b == n[3]);

    // Literal forms of the four observation equations.
    const auto r = alamouti_receive(alamouti_encode(x1, x2), h);
    CHECK(std::abs(r.y1_a - (h.h11 * x1 + h.h12 * x2)) < 1e-15);
    CHECK(std::abs(r.y2_a - (h.h21 * x1 + h.h22 * x2)) < 1e-15);
    CHECK(std::abs(r.y1_b - (-h.h11 * std::conj(x2) + h.h12 * std::conj(x1))) < 1e-15);
    CHECK(std::abs(r.y2_b - (-h.h21 * std::conj(x2) + h.h22 * std::conj(x1))) < 1e-15);

    // Linearity in (x1, x2) over real scalars (slot B is conjugate linear).
    const auto r2 = alamouti_receive(alamouti_encode(2.0 * x1, 2.0 * x2), h);
    CHECK(std::abs(r2.y1_b - 2.0 * r.y1_b) < 1e-14);
    CHECK(std::abs(r2.y2_a - 2.0 * r.y2_a) < 1e-14);
}

TEST_CASE("combining") {
    const Complex x1{0.7, 0.7};
    const Complex x2{-0.7, 0.7};
    const auto rx = alamouti_receive(alamouti_encode(x1, x2), Matrix2x2::identity());
    const auto raw = alamouti_combine_raw(rx, Matrix2x2::identity());
    CHECK(std::abs(raw.x1 - 2.0 * x1) < 1e-15);
    CHECK(std::abs(raw.x2 - 2.0 * x2) < 1e-15);
    const auto s = alamouti_combine(rx, Matrix2x2::identity());
    CHECK(std::abs(s.x1 - x1) < 1e-15);
    CHECK(std::abs(s.x2 - x2) < 1e-15);
    CHECK_THROWS_AS(alamouti_combine(rx, Matrix2x2{}), SingularMatrixError);

    Rng rng(Seed{.master = 3});
    for (int i = 0; i < 10000; ++i) {
        const auto h = random_matrix(rng);
        const Complex a = rng.complex_gaussian(1.0);
        const Complex b = rng.complex_gaussian(1.0);
        const auto r = alamouti_receive(alamouti_encode(a, b), h);
        const auto est = alamouti_combine(r, h);
        REQUIRE(std::abs(est.x1 - a) < 1e-12);
        REQUIRE(std::abs(est.x2 - b) < 1e-12);

        // Raw output is ||H||^2 x.
        const auto rr = alamouti_combine_raw(r, h);
        REQUIRE(std::abs(rr.x1 - h.frobenius_norm2() * a) < 1e-12 * (1.0 + h.frobenius_norm2()));

        // Scaling true and assumed channel together leaves the estimate unchanged.
        const double alpha = 0.1 + 3.0 * rng.uniform();
        const Matrix2x2 hs = Complex{alpha} * h;
        const auto scaled = alamouti_combine(alamouti_receive(alamouti_encode(a, b), hs), hs);
        REQUIRE(std::abs(scaled.x1 - est.x1) < 1e-12);
        REQUIRE(std::abs(scaled.x2 - est.x2) < 1e-12);
    }
}

TEST_CASE("effective channel") {
    const auto rx = alamouti_receive(alamouti_encode(1.0, 2.0), Matrix2x2::identity());
    const auto eye = build_effective_channel(Matrix2x2::identity(), rx);
    CHECK(eye.h == CMatrix(4, 2, {1, 0, 0, -1, 0, 1, 1, 0}));

    Rng rng(Seed{.master = 4});
    for (int i = 0; i < 10000; ++i) {
        const auto h = random_matrix(rng);
        const Complex a = rng.complex_gaussian(1.0);
        const Complex b = rng.complex_gaussian(1.0);
        const auto r = alamouti_receive(alamouti_encode(a, b), h);
        const auto eff = build_effective_channel(h, r);

        const CMatrix gram = eff.h.hermitian() * eff.h;
        const CMatrix expected = CMatrix(2, 2, {h.frobenius_norm2(), 0, 0, h.frobenius_norm2()});
        REQUIRE(max_abs_diff(gram, expected) < 1e-12);

        const auto recon = eff.h.apply(ComplexVector{a, b});
        REQUIRE(max_abs_diff(recon, eff.y) < 1e-12);
    }
}

TEST_CASE("SFBC subcarrier pairing") {
    const ComplexVector s{1.0, 2.0, 3.0, 4.0};
    const auto blocks = sfbc_pair_map(s);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].x1 == Complex{1.0});
    CHECK(blocks[0].x2 == Complex{2.0});
    CHECK(blocks[1].x1 == Complex{3.0});
    CHECK(blocks[1].x2 == Complex{4.0});
    CHECK_THROWS_AS(sfbc_pair_map(ComplexVector(3)), SizeError);

    Rng rng(Seed{.master = 5});
    ComplexVector r(512);
    for (auto& v : r) {
        v = rng.complex_gaussian(1.0);
    }
    CHECK(sfbc_pair_unmap(sfbc_pair_map(r)) == r);

    SUBCASE("frequency pairs behave like time slots under a pair-constant channel") {
        // Build each subcarrier's observation from per-antenna streams and
        // compare against the slot-based reception model.
        const auto pairs = sfbc_pair_map(r);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto h = random_matrix(rng);
            const auto& b = pairs[k];
            // Subcarrier 2k carries row A, subcarrier 2k+1 carries row B.
            const Complex y1_sc0 = h.h11 * b.tx[0][0] + h.h12 * b.tx[0][1];
            const Complex y1_sc1 = h.h11 * b.tx[1][0] + h.h12 * b.tx[1][1];
            const Complex y2_sc0 = h.h21 * b.tx[0][0] + h.h22 * b.tx[0][1];
            const Complex y2_sc1 = h.h21 * b.tx[1][0] + h.h22 * b.tx[1][1];
            const ReceivedBlock freq{y1_sc0, y2_sc0, y1_sc1, y2_sc1};
            const auto from_freq = alamouti_combine(freq, h);
            const auto from_time = alamouti_combine(alamouti_receive(alamouti_encode(b.x1, b.x2), h), h);
            CHECK(std::abs(from_freq.x1 - from_time.x1) < 1e-12);
            CHECK(std::abs(from_freq.x2 - from_time.x2) < 1e-12);
            CHECK(std::abs(from_freq.x1 - r[2 * k]) < 1e-12);
        }
    }
}
