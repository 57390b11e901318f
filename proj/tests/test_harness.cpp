#include <doctest.h>

#include <cmath>
#include <limits>
#include <tuple>

#include "linklab/harness.hpp"

using namespace linklab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExperimentConfig small_config(Scheme scheme) {
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.snr_grid_db = {0.0, 6.0};
    cfg.bits_per_point = 4096;
    cfg.min_error_events = 0;
    return cfg;
}

double eb_n0(double es_n0_db) { return db_to_linear(es_n0_db) / 2.0; }

}  // namespace

TEST_CASE("Wilson interval matches reference values") {
    // Reference values from an independent implementation (z = 1.959964).
    auto [lo, hi] = wilson_interval(10, 100);
    CHECK(lo == doctest::Approx(0.05522913706067509).epsilon(1e-6));
    CHECK(hi == doctest::Approx(0.17436566150491348).epsilon(1e-6));

    std::tie(lo, hi) = wilson_interval(0, 100);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(0.03699349820698569).epsilon(1e-6));

    std::tie(lo, hi) = wilson_interval(100, 100);
    CHECK(lo == doctest::Approx(0.9630065017930143).epsilon(1e-6));
    CHECK(hi == 1.0);

    CHECK_THROWS_AS(wilson_interval(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);

    for (std::uint64_t e = 0; e <= 50; ++e) {
        const auto [l, h] = wilson_interval(e, 50);
        const double p = static_cast<double>(e) / 50.0;
        CHECK(l <= p);
        CHECK(p <= h);
        CHECK(l >= 0.0);
        CHECK(h <= 1.0);
    }
}

TEST_CASE("closed-form QPSK error rates") {
    // Reference values: 0.5 erfc(sqrt(g)) at Eb/N0 = 0, 2, 4, 6, 8 dB.
    const double expected[] = {0.07864960352514258, 0.03750612835892598, 0.01250081804073755,
                               0.002388290780932807, 0.00019090777407599314};
    for (int i = 0; i < 5; ++i) {
        CHECK(theoretical_ber(TheoryModel::qpsk_awgn, db_to_linear(2.0 * i)) ==
              doctest::Approx(expected[i]).epsilon(1e-9));
    }
    CHECK(theoretical_ber(TheoryModel::qpsk_rayleigh, 10.0) == doctest::Approx(0.023268705377203824).epsilon(1e-12));
    CHECK(theoretical_ber(TheoryModel::qpsk_awgn, 0.0) == doctest::Approx(0.5));
    CHECK(theoretical_ber(TheoryModel::qpsk_rayleigh, 0.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(theoretical_ber(TheoryModel::qpsk_awgn, -1.0), std::invalid_argument);
    CHECK(received_symbol_energy(Scheme::siso_ofdm) == 1.0);
    CHECK(received_symbol_energy(Scheme::mimo_sfbc) == 2.0);
}

TEST_CASE("configuration validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.bits_per_frame() == 51200);
    CHECK(cfg.blocks_per_frame() == 50);

    cfg.bits_per_point = 1000;
    CHECK(cfg.bits_per_frame() == 1024);

    auto bad = ExperimentConfig{};
    bad.snr_grid_db = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.snr_grid_db = {4.0, 2.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.snr_grid_db = {};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.snr_grid_db = {std::nan("")};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = ExperimentConfig{};
    bad.csi_error_grid = {-0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ExperimentConfig{};
    bad.bits_per_point = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ExperimentConfig{};
    bad.threads = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ExperimentConfig{};
    bad.ofdm.cp_len = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    auto sweep = small_config(Scheme::mimo_sfbc);
    sweep.csi_error_grid = {0.1, 0.0};
    CHECK_THROWS_AS(run_csi_sweep(sweep), std::invalid_argument);
    CHECK_THROWS_AS(run_siso_ofdm(small_config(Scheme::mimo_sfbc)), std::invalid_argument);
    CHECK_THROWS_AS(run_mimo_sfbc(small_config(Scheme::siso_ofdm)), std::invalid_argument);
}

TEST_CASE("noiseless points have no errors") {
    for (auto ch : {SisoChannel::multipath, SisoChannel::awgn, SisoChannel::flat_rayleigh}) {
        auto cfg = small_config(Scheme::siso_ofdm);
        cfg.siso_channel = ch;
        cfg.snr_grid_db = {20.0, kInf};
        const auto curves = run_siso_ofdm(cfg);
        REQUIRE(curves.size() == 1);
        CHECK(curves[0].detector == kOneTapLabel);
        CHECK(curves[0].points[1].bit_errors == 0);
        CHECK(curves[0].points[1].ber == 0.0);
    }
    auto cfg = small_config(Scheme::mimo_sfbc);
    cfg.snr_grid_db = {kInf};
    for (const auto& c : run_mimo_sfbc(cfg)) {
        CHECK(c.points[0].bit_errors == 0);
        CHECK(c.points[0].ci_low == 0.0);
    }
}

TEST_CASE("bit accounting and stopping rule") {
    auto cfg = small_config(Scheme::mimo_sfbc);
    const auto one = run_mimo_sfbc(cfg);
    REQUIRE(one.size() == 2);
    CHECK(one[0].detector == "ls");
    CHECK(one[1].detector == "mmse");
    for (const auto& c : one) {
        for (const auto& p : c.points) {
            CHECK(p.bits_simulated == cfg.bits_per_frame());
            CHECK(p.seed == cfg.master_seed);
            CHECK(p.scheme == Scheme::mimo_sfbc);
            CHECK(p.ber == doctest::Approx(static_cast<double>(p.bit_errors) / static_cast<double>(p.bits_simulated)));
        }
    }

    cfg.min_error_events = 1000000;
    cfg.max_bits_factor = 3;
    const auto capped = run_mimo_sfbc(cfg);
    for (const auto& c : capped) {
        for (const auto& p : c.points) {
            CHECK(p.bits_simulated == 3 * cfg.bits_per_frame());
        }
    }

    // Stops as soon as the error target is met, in whole frames.
    cfg.min_error_events = 50;
    cfg.max_bits_factor = 100;
    cfg.snr_grid_db = {12.0};
    const auto adaptive = run_mimo_sfbc(cfg);
    for (const auto& c : adaptive) {
        const auto& p = c.points[0];
        CHECK(p.bits_simulated % cfg.bits_per_frame() == 0);
        CHECK((p.bit_errors >= 50 || p.bits_simulated == 100 * cfg.bits_per_frame()));
        CHECK(p.bits_simulated > cfg.bits_per_frame());
    }
}

TEST_CASE("results are reproducible and independent of the thread count") {
    auto cfg = small_config(Scheme::mimo_sfbc);
    cfg.min_error_events = 200;
    cfg.csi_error_grid = {0.0, 0.1};
    const auto a = run_mimo_sfbc(cfg);
    CHECK(a == run_mimo_sfbc(cfg));
    cfg.threads = 4;
    CHECK(a == run_mimo_sfbc(cfg));

    auto siso = small_config(Scheme::siso_ofdm);
    siso.min_error_events = 200;
    const auto s1 = run_siso_ofdm(siso);
    siso.threads = 3;
    CHECK(s1 == run_siso_ofdm(siso));

    cfg.threads = 1;
    cfg.master_seed = 2;
    CHECK_FALSE(a == run_mimo_sfbc(cfg));
}

TEST_CASE("LS and MMSE share realizations and agree on QPSK decisions") {
    auto cfg = small_config(Scheme::mimo_sfbc);
    cfg.snr_grid_db = {0.0, 4.0, 8.0};
    cfg.csi_error_grid = {0.0, 0.05, 0.5};
    const auto curves = run_mimo_sfbc(cfg);
    REQUIRE(curves.size() == 6);
    for (std::size_t i = 0; i < curves.size(); i += 2) {
        CHECK(curves[i].csi_error_variance == curves[i + 1].csi_error_variance);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(curves[i + 1].points[k].bit_errors <= curves[i].points[k].bit_errors);
        }
    }
}

TEST_CASE("CSI sweep reuses the standalone MIMO realizations") {
    auto cfg = small_config(Scheme::mimo_sfbc);
    cfg.min_error_events = 100;
    cfg.csi_error_grid = {0.0, 0.01, 0.1, 1.0};
    const auto sweep = run_csi_sweep(cfg);
    REQUIRE(sweep.size() == 4);
    for (const auto& c : sweep) {
        CHECK(c.detector == "mmse");
    }

    auto single = cfg;
    single.csi_error_grid = {0.0};
    const auto mimo = run_mimo_sfbc(single);
    CHECK(sweep[0].points == mimo[1].points);

    // Degradation with growing error variance.
    for (std::size_t k = 0; k < cfg.snr_grid_db.size(); ++k) {
        CHECK(sweep[3].points[k].ber > sweep[0].points[k].ber);
    }
}

TEST_CASE("AWGN calibration of the SISO chain") {
    auto cfg = small_config(Scheme::siso_ofdm);
    cfg.siso_channel = SisoChannel::awgn;
    cfg.snr_grid_db = {3.0, 7.0};
    cfg.bits_per_point = 102400;
    cfg.min_error_events = 200;
    const auto curves = run_siso_ofdm(cfg);
    for (const auto& p : curves[0].points) {
        const double theory = theoretical_ber(TheoryModel::qpsk_awgn, eb_n0(p.snr_db));
        CHECK(theory >= p.ci_low);
        CHECK(theory <= p.ci_high);
    }
}

TEST_CASE("flat Rayleigh SISO matches the closed form") {
    auto cfg = small_config(Scheme::siso_ofdm);
    cfg.siso_channel = SisoChannel::flat_rayleigh;
    cfg.snr_grid_db = {0.0, 10.0, 20.0};
    cfg.bits_per_point = 51200;
    cfg.min_error_events = 500;
    const auto curves = run_siso_ofdm(cfg);
    for (const auto& p : curves[0].points) {
        const double theory = theoretical_ber(TheoryModel::qpsk_rayleigh, eb_n0(p.snr_db));
        const double half = 0.5 * (p.ci_high - p.ci_low);
        CHECK(std::abs(p.ber - theory) <= 3.0 * half);
    }
}

TEST_CASE("multipath SISO averages to the flat Rayleigh closed form") {
    // Each frame sees one tap draw, so errors cluster by frame and the binomial
    // interval understates the spread. Compare the long-run mean instead.
    auto cfg = small_config(Scheme::siso_ofdm);
    cfg.snr_grid_db = {10.0};
    cfg.bits_per_point = 1024;
    cfg.min_error_events = 1000000;
    cfg.max_bits_factor = 400;
    const auto p = run_siso_ofdm(cfg)[0].points[0];
    CHECK(p.bits_simulated == 400 * 1024);
    const double theory = theoretical_ber(TheoryModel::qpsk_rayleigh, eb_n0(10.0));
    CHECK(p.ber == doctest::Approx(theory).epsilon(0.15));
}

TEST_CASE("SISO CSI error degrades the one-tap equalizer") {
    auto cfg = small_config(Scheme::siso_ofdm);
    cfg.siso_channel = SisoChannel::flat_rayleigh;
    cfg.snr_grid_db = {20.0};
    cfg.bits_per_point = 51200;
    cfg.csi_error_grid = {0.0, 0.1};
    const auto curves = run_siso_ofdm(cfg);
    REQUIRE(curves.size() == 2);
    CHECK(curves[1].points[0].ber > curves[0].points[0].ber);
}

TEST_CASE("name conversions") {
    CHECK(scheme_from_string(to_string(Scheme::mimo_sfbc)) == Scheme::mimo_sfbc);
    CHECK(siso_channel_from_string("flat_rayleigh") == SisoChannel::flat_rayleigh);
    CHECK_THROWS_AS(siso_channel_from_string("rician"), std::invalid_argument);
}
