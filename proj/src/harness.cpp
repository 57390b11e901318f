#include "linklab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "linklab/channel.hpp"
#include "linklab/modem.hpp"

namespace linklab {

namespace {

// Error counts of one frame, one entry per curve.
using TrialErrors = std::vector<std::uint64_t>;
using TrialFn = std::function<TrialErrors(std::uint64_t trial)>;

/// Runs trials [first, first + count) on up to `threads` workers. Results are
/// stored by trial index, so the caller sees the same data for any worker count.
std::vector<TrialErrors> run_batch(const TrialFn& fn, std::uint64_t first, std::size_t count, unsigned threads) {
    std::vector<TrialErrors> out(count);
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(first + i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    try {
                        out[i] = fn(first + i);
                    } catch (...) {
                        if (!failed.exchange(true)) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

struct Tally {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    bool done = false;
};

/// Accumulates frames in trial order until every curve meets the stopping
/// rule; returns one tally per curve.
std::vector<Tally> accumulate(const ExperimentConfig& cfg, std::size_t n_curves, const TrialFn& fn) {
    const std::uint64_t frame_bits = cfg.bits_per_frame();
    const std::uint64_t cap = static_cast<std::uint64_t>(cfg.max_bits_factor) * cfg.bits_per_point;
    std::vector<Tally> tallies(n_curves);
    const std::size_t batch = std::max<std::size_t>(1, 2 * static_cast<std::size_t>(cfg.threads));
    std::uint64_t trial = 0;
    auto all_done = [&] {
        return std::all_of(tallies.begin(), tallies.end(), [](const Tally& t) { return t.done; });
    };
    while (!all_done()) {
        const auto results = run_batch(fn, trial, batch, cfg.threads);
        for (const auto& frame : results) {
            for (std::size_t c = 0; c < n_curves; ++c) {
                Tally& t = tallies[c];
                if (t.done) {
                    continue;
                }
                t.bits += frame_bits;
                t.errors += frame[c];
                if (t.bits >= cfg.bits_per_point && (t.errors >= cfg.min_error_events || t.bits >= cap)) {
                    t.done = true;
                }
            }
            if (all_done()) {
                break;
            }
        }
        trial += batch;
    }
    return tallies;
}

Seed trial_seed(const ExperimentConfig& cfg, std::uint64_t experiment, std::size_t snr_index, std::uint64_t trial) {
    Seed s;
    s.master = cfg.master_seed;
    s.experiment = experiment;
    s.snr_index = snr_index;
    s.trial_index = trial;
    return s;
}

double noise_variance(double snr_db, Scheme scheme) {
    if (std::isinf(snr_db) && snr_db > 0) {
        return 0.0;
    }
    return snr_to_noise_variance(snr_db, received_symbol_energy(scheme));
}

TrialErrors siso_trial(const ExperimentConfig& cfg, std::size_t snr_index, double sigma2, std::uint64_t trial) {
    const Seed seed = trial_seed(cfg, kExperimentSiso, snr_index, trial);
    OfdmConfig ofdm = cfg.ofdm;
    ofdm.n_blocks = cfg.blocks_per_frame();

    const BitStream bits = generate_bits(seed.with_stream(Stream::bits), cfg.bits_per_frame());
    const ComplexVector symbols = qpsk_modulate(bits);

    ComplexVector received;
    ComplexVector response;
    if (cfg.siso_channel == SisoChannel::flat_rayleigh) {
        // Per-subcarrier flat fading applied directly in the frequency domain.
        Rng rng(seed.with_stream(Stream::channel));
        response.resize(symbols.size());
        for (auto& h : response) {
            h = rng.complex_gaussian(1.0);
        }
        ComplexVector faded(symbols.size());
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            faded[i] = response[i] * symbols[i];
        }
        received = add_awgn(faded, sigma2, seed.with_stream(Stream::noise));
    } else {
        ChannelTaps taps;
        if (cfg.siso_channel == SisoChannel::awgn) {
            taps.taps = {Complex{1.0, 0.0}};
            taps.power_profile = {1.0};
        } else {
            taps = draw_rayleigh_taps(seed.with_stream(Stream::channel), cfg.channel_taps);
        }
        const ComplexVector tx = ofdm_modulate(symbols, ofdm);
        const ComplexVector rx = add_awgn(apply_fir_channel(tx, taps), sigma2, seed.with_stream(Stream::noise));
        received = ofdm_demodulate(rx, ofdm);
        response = channel_frequency_response(taps.taps, ofdm.nfft);
    }

    TrialErrors errors;
    errors.reserve(cfg.csi_error_grid.size());
    for (double csi_var : cfg.csi_error_grid) {
        const ComplexVector estimate =
            corrupt_csi(response, CsiModel::noisy(csi_var), seed.with_stream(Stream::csi));
        const Equalized eq = equalize_onetap(received, estimate);
        errors.push_back(count_bit_errors(bits, qpsk_demodulate(eq.symbols)));
    }
    return errors;
}

TrialErrors mimo_trial(const ExperimentConfig& cfg, std::size_t snr_index, double sigma2, std::uint64_t trial) {
    const Seed seed = trial_seed(cfg, kExperimentMimo, snr_index, trial);
    const BitStream bits = generate_bits(seed.with_stream(Stream::bits), cfg.bits_per_frame());
    const auto blocks = sfbc_pair_map(qpsk_modulate(bits));
    const MimoFlatChannel channel = draw_mimo_flat_channel(seed.with_stream(Stream::channel), blocks.size());

    std::vector<ReceivedBlock> received;
    received.reserve(blocks.size());
    Rng noise_rng(seed.with_stream(Stream::noise));
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        BlockNoise n{};
        if (sigma2 > 0.0) {
            for (auto& v : n) {
                v = noise_rng.complex_gaussian(sigma2);
            }
        }
        received.push_back(alamouti_receive(blocks[k], channel.units[k], n));
    }

    TrialErrors errors;
    errors.reserve(cfg.csi_error_grid.size() * cfg.detectors.size());
    ComplexVector estimates(2 * blocks.size());
    for (double csi_var : cfg.csi_error_grid) {
        // Same CSI substream for every grid entry: the error draws are nested
        // (scaled copies of one another) across the sweep.
        const MimoFlatChannel h_hat =
            corrupt_csi(channel, CsiModel::noisy(csi_var), seed.with_stream(Stream::csi));
        for (DetectorKind kind : cfg.detectors) {
            for (std::size_t k = 0; k < blocks.size(); ++k) {
                const SymbolPair s = detect_alamouti(received[k], h_hat.units[k], sigma2, kind);
                estimates[2 * k] = s.x1;
                estimates[2 * k + 1] = s.x2;
            }
            errors.push_back(count_bit_errors(bits, qpsk_demodulate(estimates)));
        }
    }
    return errors;
}

using TrialFactory = std::function<TrialErrors(std::size_t snr_index, double sigma2, std::uint64_t trial)>;

std::vector<BerCurve> run_experiment(const ExperimentConfig& cfg, const std::vector<std::string>& detector_labels,
                                     const TrialFactory& trial) {
    std::vector<BerCurve> curves;
    for (double csi_var : cfg.csi_error_grid) {
        for (const auto& label : detector_labels) {
            BerCurve c;
            c.scheme = cfg.scheme;
            c.detector = label;
            c.csi_error_variance = csi_var;
            curves.push_back(std::move(c));
        }
    }
    for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
        const double snr = cfg.snr_grid_db[si];
        const double sigma2 = noise_variance(snr, cfg.scheme);
        const auto tallies =
            accumulate(cfg, curves.size(), [&](std::uint64_t t) { return trial(si, sigma2, t); });
        for (std::size_t c = 0; c < curves.size(); ++c) {
            BerPoint p = make_point(snr, curves[c].csi_error_variance, tallies[c].bits, tallies[c].errors);
            p.detector = curves[c].detector;
            p.scheme = cfg.scheme;
            p.seed = cfg.master_seed;
            curves[c].points.push_back(std::move(p));
        }
    }
    return curves;
}

}  // namespace

std::string_view to_string(Scheme s) {
    return s == Scheme::siso_ofdm ? "siso_ofdm" : "mimo_sfbc";
}

std::string_view to_string(SisoChannel c) {
    switch (c) {
        case SisoChannel::multipath:
            return "multipath";
        case SisoChannel::awgn:
            return "awgn";
        case SisoChannel::flat_rayleigh:
            return "flat_rayleigh";
    }
    return "?";
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "siso_ofdm") {
        return Scheme::siso_ofdm;
    }
    if (name == "mimo_sfbc") {
        return Scheme::mimo_sfbc;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

SisoChannel siso_channel_from_string(std::string_view name) {
    for (auto c : {SisoChannel::multipath, SisoChannel::awgn, SisoChannel::flat_rayleigh}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw std::invalid_argument("unknown channel model '" + std::string(name) + "'");
}

std::size_t ExperimentConfig::bits_per_frame() const {
    const std::size_t symbol_bits = 2 * ofdm.nfft;
    return blocks_per_frame() * symbol_bits;
}

std::size_t ExperimentConfig::blocks_per_frame() const {
    const std::size_t symbol_bits = 2 * ofdm.nfft;
    return std::max<std::size_t>(1, (bits_per_point + symbol_bits - 1) / symbol_bits);
}

void ExperimentConfig::validate() const {
    OfdmConfig o = ofdm;
    o.n_blocks = 1;
    o.validate();
    if (scheme == Scheme::siso_ofdm && siso_channel == SisoChannel::multipath) {
        o.validate_channel(channel_taps);
    }
    if (bits_per_point == 0) {
        throw std::invalid_argument("bits per point must be positive");
    }
    if (max_bits_factor == 0) {
        throw std::invalid_argument("bit cap factor must be positive");
    }
    if (snr_grid_db.empty()) {
        throw std::invalid_argument("SNR grid is empty");
    }
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        if (std::isnan(snr_grid_db[i]) || (std::isinf(snr_grid_db[i]) && snr_grid_db[i] < 0)) {
            throw std::invalid_argument("SNR grid entries must be finite or +inf");
        }
        if (i > 0 && !(snr_grid_db[i] > snr_grid_db[i - 1])) {
            throw std::invalid_argument("SNR grid must be strictly increasing");
        }
    }
    if (csi_error_grid.empty()) {
        throw std::invalid_argument("CSI error grid is empty");
    }
    for (double v : csi_error_grid) {
        if (!(v >= 0.0) || std::isinf(v)) {
            throw std::invalid_argument("CSI error variances must be finite and >= 0");
        }
    }
    if (scheme == Scheme::mimo_sfbc && detectors.empty()) {
        throw std::invalid_argument("no detector selected");
    }
    if (threads == 0) {
        throw std::invalid_argument("thread count must be >= 1");
    }
}

std::vector<BerCurve> run_siso_ofdm(const ExperimentConfig& cfg) {
    if (cfg.scheme != Scheme::siso_ofdm) {
        throw std::invalid_argument("run_siso_ofdm: scheme must be siso_ofdm");
    }
    cfg.validate();
    return run_experiment(cfg, {std::string(kOneTapLabel)},
                          [&](std::size_t si, double s2, std::uint64_t t) { return siso_trial(cfg, si, s2, t); });
}

std::vector<BerCurve> run_mimo_sfbc(const ExperimentConfig& cfg) {
    if (cfg.scheme != Scheme::mimo_sfbc) {
        throw std::invalid_argument("run_mimo_sfbc: scheme must be mimo_sfbc");
    }
    cfg.validate();
    std::vector<std::string> labels;
    for (auto d : cfg.detectors) {
        labels.emplace_back(to_string(d));
    }
    return run_experiment(cfg, labels,
                          [&](std::size_t si, double s2, std::uint64_t t) { return mimo_trial(cfg, si, s2, t); });
}

std::vector<BerCurve> run_csi_sweep(const ExperimentConfig& cfg) {
    if (cfg.csi_error_grid.empty()) {
        throw std::invalid_argument("run_csi_sweep: CSI error grid is empty");
    }
    if (!std::is_sorted(cfg.csi_error_grid.begin(), cfg.csi_error_grid.end())) {
        throw std::invalid_argument("run_csi_sweep: CSI error grid must be nondecreasing");
    }
    ExperimentConfig sweep = cfg;
    sweep.scheme = Scheme::mimo_sfbc;
    sweep.detectors = {DetectorKind::mmse};
    return run_mimo_sfbc(sweep);
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t n, double z) {
    if (n == 0 || errors > n) {
        throw std::invalid_argument("wilson_interval: need 0 <= errors <= n and n >= 1");
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    double lo = errors == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
    double hi = errors == n ? 1.0 : std::clamp(center + half, p, 1.0);
    return {lo, hi};
}

BerPoint make_point(double snr_db, double csi_var, std::uint64_t bits, std::uint64_t errors) {
    BerPoint p;
    p.snr_db = snr_db;
    p.csi_error_variance = csi_var;
    p.bits_simulated = bits;
    p.bit_errors = errors;
    p.ber = static_cast<double>(errors) / static_cast<double>(bits);
    std::tie(p.ci_low, p.ci_high) = wilson_interval(errors, bits);
    return p;
}

double theoretical_ber(TheoryModel model, double snr_per_bit) {
    if (snr_per_bit < 0.0) {
        throw std::invalid_argument("theoretical_ber: negative SNR");
    }
    switch (model) {
        case TheoryModel::qpsk_awgn:
            return 0.5 * std::erfc(std::sqrt(snr_per_bit));
        case TheoryModel::qpsk_rayleigh:
            return 0.5 * (1.0 - std::sqrt(snr_per_bit / (1.0 + snr_per_bit)));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double received_symbol_energy(Scheme s) { return s == Scheme::siso_ofdm ? 1.0 : 2.0; }

}  // namespace linklab
