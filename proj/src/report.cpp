// CSV and SVG emitters for BER curves.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "linklab/cli.hpp"

namespace linklab {

namespace {

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_number(values[i]);
    }
    return out;
}

std::string detectors_key(const ExperimentConfig& cfg) {
    if (cfg.detectors.size() == 2) {
        return "both";
    }
    return cfg.detectors.empty() ? "none" : std::string(to_string(cfg.detectors.front()));
}

// Preamble lines mirror the flag names so that, with the leading "# "
// removed, they form a valid --config file.
void write_preamble(std::ostream& os, const RunManifest& m) {
    const ExperimentConfig& c = m.config;
    os << "# linklab " << m.tool_version << '\n';
    os << "# command = " << to_string(m.command) << '\n';
    os << "# snr = " << join_numbers(c.snr_grid_db) << '\n';
    os << "# seed = " << c.master_seed << '\n';
    os << "# bits = " << c.bits_per_point << '\n';
    os << "# min-errors = " << c.min_error_events << '\n';
    os << "# max-bits-factor = " << c.max_bits_factor << '\n';
    os << "# nfft = " << c.ofdm.nfft << '\n';
    os << "# cp = " << c.ofdm.cp_len << '\n';
    os << "# taps = " << c.channel_taps << '\n';
    os << "# channel = " << to_string(c.siso_channel) << '\n';
    os << "# detector = " << detectors_key(c) << '\n';
    os << "# csi-var = " << join_numbers(c.csi_error_grid) << '\n';
    os << "# snr-definition = Es/N0 per receive antenna, Es = "
       << format_number(received_symbol_energy(c.scheme)) << '\n';
    if (m.stamp) {
        os << "# timestamp = " << m.timestamp << '\n';
        os << "# out = " << (m.csv_path.empty() ? std::string("-") : m.csv_path.string()) << '\n';
        if (m.svg_path) {
            os << "# svg = " << m.svg_path->string() << '\n';
        }
    }
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    fn(os);
    os.flush();
    if (!os) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

}  // namespace

std::string format_number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    std::string s(buf);
    if (s.find_first_of(".e") == std::string::npos) {
        s += ".0";
    }
    return s;
}

void write_csv(std::ostream& os, const std::vector<BerCurve>& curves, const RunManifest& manifest) {
    if (curves.empty()) {
        throw std::invalid_argument("write_csv: no curves");
    }
    write_preamble(os, manifest);
    os << kCsvHeader << '\n';
    for (const auto& curve : curves) {
        for (const auto& p : curve.points) {
            os << to_string(p.scheme) << ',' << p.detector << ',' << format_number(p.csi_error_variance) << ','
               << format_number(p.snr_db) << ',' << p.bits_simulated << ',' << p.bit_errors << ','
               << format_number(p.ber) << ',' << format_number(p.ci_low) << ',' << format_number(p.ci_high) << ','
               << p.seed << '\n';
        }
    }
}

void write_csv(const std::filesystem::path& path, const std::vector<BerCurve>& curves, const RunManifest& manifest) {
    write_file(path, [&](std::ostream& os) { write_csv(os, curves, manifest); });
}

void render_svg(std::ostream& os, const std::vector<BerCurve>& curves) {
    if (curves.empty()) {
        throw std::invalid_argument("render_svg: no curves");
    }
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    for (const auto& c : curves) {
        std::size_t finite = 0;
        for (const auto& p : c.points) {
            if (std::isfinite(p.snr_db)) {
                x_min = std::min(x_min, p.snr_db);
                x_max = std::max(x_max, p.snr_db);
                ++finite;
            }
        }
        if (finite < 2) {
            throw std::invalid_argument("render_svg: each curve needs at least two finite SNR points");
        }
    }
    if (x_max == x_min) {
        x_max = x_min + 1.0;
    }

    constexpr double width = 720;
    constexpr double height = 480;
    constexpr double left = 70;
    constexpr double right = 200;
    constexpr double top = 20;
    constexpr double bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const double y_lo = std::log10(kSvgBerFloor);
    const double y_hi = 0.0;
    auto px = [&](double snr) { return left + (snr - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double ber) {
        const double l = std::log10(std::max(ber, kSvgBerFloor));
        return top + (y_hi - l) / (y_hi - y_lo) * plot_h;
    };
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    char buf[128];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int decade = static_cast<int>(y_lo); decade <= 0; ++decade) {
        const double y = py(std::pow(10.0, decade));
        std::snprintf(buf, sizeof buf, "%.2f", y);
        os << "<line x1=\"" << left << "\" y1=\"" << buf << "\" x2=\"" << left + plot_w << "\" y2=\"" << buf
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << buf << "\" text-anchor=\"end\" dominant-baseline=\"middle\">1e"
           << decade << "</text>\n";
    }
    constexpr int x_ticks = 5;
    for (int i = 0; i <= x_ticks; ++i) {
        const double snr = x_min + (x_max - x_min) * i / x_ticks;
        std::snprintf(buf, sizeof buf, "%.2f", px(snr));
        os << "<line x1=\"" << buf << "\" y1=\"" << top << "\" x2=\"" << buf << "\" y2=\"" << top + plot_h
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << buf << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
           << format_number(snr) << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
    os << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << top + plot_h / 2 << ")\">BER</text>\n";

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const auto& c = curves[ci];
        const char* color = palette[ci % std::size(palette)];
        std::ostringstream pts;
        std::ostringstream markers;
        bool first = true;
        for (const auto& p : c.points) {
            if (!std::isfinite(p.snr_db)) {
                continue;
            }
            const bool clipped = p.ber < kSvgBerFloor;
            std::snprintf(buf, sizeof buf, "%.2f,%.2f", px(p.snr_db), py(p.ber));
            pts << (first ? "" : " ") << buf;
            first = false;
            std::snprintf(buf, sizeof buf, "cx=\"%.2f\" cy=\"%.2f\"", px(p.snr_db), py(p.ber));
            markers << "<circle " << buf << " r=\"3.5\" stroke=\"" << color << "\" fill=\""
                    << (clipped ? "none" : color) << "\"/>\n";
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
           << "\"/>\n";
        os << markers.str();
        const double ly = top + 14 + 18 * static_cast<double>(ci);
        const double lx = left + plot_w + 12;
        os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly << "\" stroke=\""
           << color << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << lx + 30 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">" << to_string(c.scheme)
           << ' ' << c.detector << " csi=" << format_number(c.csi_error_variance) << "</text>\n";
    }
    os << "</svg>\n";
}

void render_svg(const std::filesystem::path& path, const std::vector<BerCurve>& curves) {
    write_file(path, [&](std::ostream& os) { render_svg(os, curves); });
}

}  // namespace linklab
