#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linklab/detect.hpp"
#include "linklab/ofdm.hpp"

namespace linklab {

enum class Scheme { siso_ofdm, mimo_sfbc };

/// Channel applied on the SISO path.
///   multipath     - Rayleigh FIR taps, block fading per frame (default)
///   awgn          - identity channel; calibrates the SNR bookkeeping
///   flat_rayleigh - independent CN(0,1) gain per subcarrier and OFDM symbol
enum class SisoChannel { multipath, awgn, flat_rayleigh };

std::string_view to_string(Scheme s);
std::string_view to_string(SisoChannel c);
Scheme scheme_from_string(std::string_view name);
SisoChannel siso_channel_from_string(std::string_view name);

/// Label used in the detector column for the SISO one-tap equalizer.
inline constexpr std::string_view kOneTapLabel = "one_tap";

struct ExperimentConfig {
    Scheme scheme = Scheme::siso_ofdm;
    /// Detectors evaluated on the MIMO path; ignored for SISO.
    std::vector<DetectorKind> detectors{DetectorKind::ls, DetectorKind::mmse};
    /// Es/N0 per receive antenna, dB. +inf means a noiseless point.
    std::vector<double> snr_grid_db{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    std::size_t bits_per_point = 51200;
    /// Keep drawing frames past bits_per_point until this many errors are
    /// seen. Zero gives exactly one frame of bits_per_point bits per point.
    std::size_t min_error_events = 100;
    /// Hard cap, in multiples of bits_per_point.
    std::size_t max_bits_factor = 100;
    std::uint64_t master_seed = 1;
    /// n_blocks is derived from bits_per_point; the value set here is ignored.
    OfdmConfig ofdm{512, 10, 1};
    std::size_t channel_taps = 6;
    SisoChannel siso_channel = SisoChannel::multipath;
    std::vector<double> csi_error_grid{0.0};
    /// Worker threads. Does not affect results.
    unsigned threads = 1;

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;

    /// bits_per_point rounded up to a whole number of OFDM symbols.
    std::size_t bits_per_frame() const;
    std::size_t blocks_per_frame() const;
};

struct BerPoint {
    double snr_db = 0.0;
    double csi_error_variance = 0.0;
    std::uint64_t bits_simulated = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::string detector;
    Scheme scheme = Scheme::siso_ofdm;
    std::uint64_t seed = 0;

    friend bool operator==(const BerPoint&, const BerPoint&) = default;
};

struct BerCurve {
    Scheme scheme = Scheme::siso_ofdm;
    std::string detector;
    double csi_error_variance = 0.0;
    std::vector<BerPoint> points;

    friend bool operator==(const BerCurve&, const BerCurve&) = default;
};

/// SISO experiment: QPSK over OFDM through a fading channel with
/// one-tap equalization. One curve per entry of csi_error_grid.
std::vector<BerCurve> run_siso_ofdm(const ExperimentConfig& cfg);

/// MIMO experiment: 2x2 SFBC with linear detection. Curves are ordered
/// by csi_error_grid entry, then by detector. All curves at an SNR point
/// share the same bit, channel and noise realizations.
std::vector<BerCurve> run_mimo_sfbc(const ExperimentConfig& cfg);

/// CSI sweep: MMSE-detected SFBC once per CSI error variance, with
/// paired seeds across the grid. The grid must be non-empty and nondecreasing.
std::vector<BerCurve> run_csi_sweep(const ExperimentConfig& cfg);

inline constexpr double kWilsonZ95 = 1.959964;

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t n, double z = kWilsonZ95);

BerPoint make_point(double snr_db, double csi_var, std::uint64_t bits, std::uint64_t errors);

enum class TheoryModel { qpsk_awgn, qpsk_rayleigh };

/// Closed-form QPSK bit error probability at snr_per_bit = Eb/N0 (linear).
///   qpsk_awgn:     Q(sqrt(2 snr))
///   qpsk_rayleigh: (1 - sqrt(snr / (1 + snr))) / 2, flat one-tap fading
double theoretical_ber(TheoryModel model, double snr_per_bit);

double db_to_linear(double db);

/// Symbol energy per receive antenna entering the SNR definition: 1 for SISO,
/// 2 for the two-antenna SFBC transmitter (unit energy per antenna).
double received_symbol_energy(Scheme s);

inline constexpr std::uint64_t kExperimentSiso = 1;
inline constexpr std::uint64_t kExperimentMimo = 2;

}  // namespace linklab
