#include "linklab/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <sstream>

#include "linklab/channel.hpp"
#include "linklab/modem.hpp"

namespace linklab {

namespace {

double parse_double(const std::string& token) {
    std::string t = token;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (t == "inf" || t == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + token + "'");
    }
    if (used != t.size() || !std::isfinite(v)) {
        throw std::invalid_argument("not a number: '" + token + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RawOptions {
    std::string snr = "0:2:20";
    std::uint64_t seed = 1;
    std::size_t bits = 51200;
    std::size_t min_errors = 100;
    std::size_t max_bits_factor = 100;
    std::size_t nfft = 512;
    std::size_t cp = 10;
    std::size_t taps = 6;
    std::string channel = "multipath";
    std::string detector = "both";
    std::string csi_var = "0";
    unsigned threads = 1;
    std::string out;
    std::string svg;
    bool stamp = false;
};

void add_options(CLI::App& app, RawOptions& o) {
    // Config files hand comma lists over as arrays; join them back.
    app.add_option("--snr", o.snr, "SNR grid in dB (Es/N0 per receive antenna): a:step:b or a,b,c")
        ->multi_option_policy(CLI::MultiOptionPolicy::Join)
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--seed", o.seed, "Master seed")->envname("LINKLAB_SEED")->capture_default_str();
    app.add_option("--bits", o.bits, "Bits per iteration (one frame)")->capture_default_str();
    app.add_option("--min-errors", o.min_errors, "Keep simulating until this many bit errors (0: one frame)")
        ->capture_default_str();
    app.add_option("--max-bits-factor", o.max_bits_factor, "Hard cap in multiples of --bits")->capture_default_str();
    app.add_option("--nfft", o.nfft, "FFT size")->capture_default_str();
    app.add_option("--cp", o.cp, "Cyclic prefix length")->capture_default_str();
    app.add_option("--taps", o.taps, "Multipath channel length")->capture_default_str();
    app.add_option("--channel", o.channel, "SISO channel: multipath, awgn or flat_rayleigh")
        ->check(CLI::IsMember({"multipath", "awgn", "flat_rayleigh"}))
        ->capture_default_str();
    app.add_option("--detector", o.detector, "MIMO detector: ls, mmse or both")
        ->check(CLI::IsMember({"ls", "mmse", "both"}))
        ->capture_default_str();
    app.add_option("--csi-var", o.csi_var, "CSI error variance grid, comma separated")
        ->multi_option_policy(CLI::MultiOptionPolicy::Join)
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", o.out, "CSV output path (default: standard output)");
    app.add_option("--svg", o.svg, "Also render the curves to this SVG file");
    app.add_flag("--stamp", o.stamp, "Record a timestamp and output paths in the CSV preamble");
}

}  // namespace

std::string_view to_string(Command c) {
    switch (c) {
        case Command::siso_ofdm:
            return "siso-ofdm";
        case Command::mimo_sfbc:
            return "mimo-sfbc";
        case Command::csi_sweep:
            return "csi-sweep";
        case Command::selftest:
            return "selftest";
    }
    return "?";
}

std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw std::invalid_argument("range must look like start:step:stop, got '" + text + "'");
        }
        const double a = parse_double(parts[0]);
        const double step = parse_double(parts[1]);
        const double b = parse_double(parts[2]);
        if (!std::isfinite(a) || !std::isfinite(b) || !(step > 0.0) || b < a) {
            throw std::invalid_argument("range must have finite bounds, stop >= start and step > 0");
        }
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(a + static_cast<double>(i) * step);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& tok : split(text, ',')) {
        out.push_back(parse_double(tok));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty grid");
    }
    return out;
}

RunManifest parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"Link-level BER simulator for SISO-OFDM and 2x2 SFBC links", "linklab"};
    app.set_version_flag("--version", std::string("linklab ") + kToolVersion);
    app.set_config("--config", "", "Read flag values from a key = value file");
    RawOptions o;
    add_options(app, o);
    auto* siso = app.add_subcommand("siso-ofdm", "SISO-OFDM BER curve with one-tap equalization");
    auto* mimo = app.add_subcommand("mimo-sfbc", "2x2 SFBC BER curves with LS and MMSE detection");
    auto* sweep = app.add_subcommand("csi-sweep", "MMSE SFBC BER curves over a CSI error grid");
    auto* self = app.add_subcommand("selftest", "Run the built-in invariant checks");
    for (auto* sub : {siso, mimo, sweep, self}) {
        sub->fallthrough();
    }
    app.require_subcommand(1);
    const std::string usage = app.help();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw UsageError("", usage);
    } catch (const CLI::CallForVersion&) {
        throw UsageError("", app.version());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what(), usage);
    }

    RunManifest m;
    if (siso->parsed()) {
        m.command = Command::siso_ofdm;
    } else if (mimo->parsed()) {
        m.command = Command::mimo_sfbc;
    } else if (sweep->parsed()) {
        m.command = Command::csi_sweep;
    } else {
        m.command = Command::selftest;
    }

    ExperimentConfig& c = m.config;
    try {
        c.scheme = m.command == Command::siso_ofdm ? Scheme::siso_ofdm : Scheme::mimo_sfbc;
        c.snr_grid_db = parse_grid(o.snr);
        c.master_seed = o.seed;
        c.bits_per_point = o.bits;
        c.min_error_events = o.min_errors;
        c.max_bits_factor = o.max_bits_factor;
        c.ofdm.nfft = o.nfft;
        c.ofdm.cp_len = o.cp;
        c.channel_taps = o.taps;
        c.siso_channel = siso_channel_from_string(o.channel);
        if (o.detector == "both") {
            c.detectors = {DetectorKind::ls, DetectorKind::mmse};
        } else {
            c.detectors = {detector_from_string(o.detector)};
        }
        if (m.command == Command::csi_sweep) {
            c.detectors = {DetectorKind::mmse};
        }
        c.csi_error_grid = parse_grid(o.csi_var);
        c.threads = o.threads;
        c.validate();
        // The CP condition is a property of the OFDM numerology, so it is
        // enforced for every command, not only the multipath SISO run.
        c.ofdm.validate_channel(c.channel_taps);
        if (m.command == Command::csi_sweep &&
            !std::is_sorted(c.csi_error_grid.begin(), c.csi_error_grid.end())) {
            throw std::invalid_argument("csi-sweep needs a nondecreasing --csi-var grid");
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what(), usage);
    }

    m.csv_path = o.out;
    if (!o.svg.empty()) {
        m.svg_path = o.svg;
    }
    m.stamp = o.stamp;
    if (m.stamp) {
        m.timestamp = now_utc();
    }
    return m;
}

bool run_selftest(std::ostream& out) {
    bool all_ok = true;
    auto report = [&](const char* name, bool ok, double metric) {
        out << (ok ? "PASS  " : "FAIL  ") << name << "  (" << metric << ")\n";
        all_ok = all_ok && ok;
    };
    Rng rng(Seed{.master = 0x5e1f7e57, .stream = Stream::test});
    auto random_vector = [&](std::size_t n) {
        ComplexVector v(n);
        for (auto& x : v) {
            x = rng.complex_gaussian(1.0);
        }
        return v;
    };

    double fft_err = 0.0;
    for (std::size_t n = 2; n <= 512; n *= 2) {
        const auto x = random_vector(n);
        fft_err = std::max(fft_err, max_abs_diff(fft(x), naive_dft(x, false)));
    }
    report("fft matches naive DFT", fft_err < 1e-9, fft_err);

    double cp_err = 0.0;
    const OfdmConfig ofdm{512, 10, 1};
    for (int frame = 0; frame < 10; ++frame) {
        const auto x = random_vector(512);
        const auto taps = draw_rayleigh_taps(Seed{.master = 7, .trial_index = static_cast<std::uint64_t>(frame)}, 6);
        const auto y = ofdm_demodulate(apply_fir_channel(ofdm_modulate(x, ofdm), taps), ofdm);
        const auto h = channel_frequency_response(taps.taps, 512);
        for (std::size_t k = 0; k < 512; ++k) {
            cp_err = std::max(cp_err, std::abs(y[k] - h[k] * x[k]));
        }
    }
    report("cyclic prefix gives per-subcarrier product", cp_err < 1e-9, cp_err);

    double orth_err = 0.0;
    double combine_err = 0.0;
    double coincide_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Matrix2x2 h{rng.complex_gaussian(1.0), rng.complex_gaussian(1.0), rng.complex_gaussian(1.0),
                          rng.complex_gaussian(1.0)};
        const Complex x1 = rng.complex_gaussian(1.0);
        const Complex x2 = rng.complex_gaussian(1.0);
        const auto rx = alamouti_receive(alamouti_encode(x1, x2), h);
        const auto eff = build_effective_channel(h, rx);
        const CMatrix gram = eff.h.hermitian() * eff.h;
        const double e = h.frobenius_norm2();
        orth_err = std::max({orth_err, std::abs(gram(0, 0) - e), std::abs(gram(1, 1) - e), std::abs(gram(0, 1)),
                             std::abs(gram(1, 0))});
        const auto s = alamouti_combine(rx, h);
        combine_err = std::max({combine_err, std::abs(s.x1 - x1), std::abs(s.x2 - x2)});
        const auto ls = detect_alamouti(rx, h, 0.0, DetectorKind::ls);
        const auto mm = detect_alamouti(rx, h, 0.0, DetectorKind::mmse);
        coincide_err = std::max({coincide_err, std::abs(ls.x1 - mm.x1), std::abs(ls.x2 - mm.x2),
                                 std::abs(ls.x1 - s.x1), std::abs(ls.x2 - s.x2)});
    }
    report("Alamouti effective channel is orthogonal", orth_err < 1e-12, orth_err);
    report("Alamouti combining recovers symbols", combine_err < 1e-12, combine_err);
    report("LS, MMSE(0) and combiner coincide", coincide_err < 1e-12, coincide_err);

    ExperimentConfig cfg;
    cfg.scheme = Scheme::siso_ofdm;
    cfg.siso_channel = SisoChannel::awgn;
    cfg.bits_per_point = 204800;
    cfg.min_error_events = 0;
    const double ebn0_db = 4.0;
    cfg.snr_grid_db = {ebn0_db + 10.0 * std::log10(2.0)};
    const auto curve = run_siso_ofdm(cfg).front().points.front();
    const double theory = theoretical_ber(TheoryModel::qpsk_awgn, db_to_linear(ebn0_db));
    const double tol = 3.0 * (curve.ci_high - curve.ci_low);
    report("AWGN QPSK calibration at Eb/N0 = 4 dB", std::abs(curve.ber - theory) <= tol, curve.ber);
    return all_ok;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunManifest m;
    try {
        m = parse_cli(args);
    } catch (const UsageError& e) {
        const std::string what = e.what();
        if (what.empty()) {
            // --help / --version
            out << e.usage() << '\n';
            return kExitOk;
        }
        err << "error: " << what << "\n\n" << e.usage() << '\n';
        return kExitUsage;
    }

    if (m.command == Command::selftest) {
        return run_selftest(out) ? kExitOk : kExitCheckFailed;
    }

    std::vector<BerCurve> curves;
    try {
        switch (m.command) {
            case Command::siso_ofdm:
                curves = run_siso_ofdm(m.config);
                break;
            case Command::mimo_sfbc:
                curves = run_mimo_sfbc(m.config);
                break;
            case Command::csi_sweep:
                curves = run_csi_sweep(m.config);
                break;
            case Command::selftest:
                break;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }

    try {
        if (m.csv_path.empty()) {
            write_csv(out, curves, m);
        } else {
            write_csv(m.csv_path, curves, m);
        }
        if (m.svg_path) {
            render_svg(*m.svg_path, curves);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace linklab
