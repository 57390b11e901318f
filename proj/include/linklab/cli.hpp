#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linklab/harness.hpp"

namespace linklab {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitIo = 3,
    kExitCheckFailed = 4,
};

/// Bad flag, bad value or a configuration that fails validation. Carries the
/// usage text to print alongside the message.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& what, std::string usage) : std::runtime_error(what), usage_(std::move(usage)) {}
    const std::string& usage() const { return usage_; }

private:
    std::string usage_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { siso_ofdm, mimo_sfbc, csi_sweep, selftest };

std::string_view to_string(Command c);

struct RunManifest {
    Command command = Command::selftest;
    ExperimentConfig config;
    std::string tool_version = kToolVersion;
    /// Empty unless --stamp was given.
    std::string timestamp;
    /// Empty path means standard output.
    std::filesystem::path csv_path;
    std::optional<std::filesystem::path> svg_path;
    /// Write timestamp and output paths into the CSV preamble.
    bool stamp = false;
};

/// Parses arguments (without the program name). Precedence is flags, then
/// the --config file, then LINKLAB_SEED (seed only), then defaults.
/// Throws UsageError.
RunManifest parse_cli(const std::vector<std::string>& args);

/// "a:step:b" (inclusive) or a comma list; "inf" is accepted as an entry.
std::vector<double> parse_grid(const std::string& text);

/// %.10g, with ".0" appended to integral values; "inf" for infinity.
std::string format_number(double v);

inline constexpr const char* kCsvHeader = "scheme,detector,csi_error_var,snr_db,bits,bit_errors,ber,ci_low,ci_high,seed";

void write_csv(std::ostream& os, const std::vector<BerCurve>& curves, const RunManifest& manifest);
/// Throws IoError naming the path on failure.
void write_csv(const std::filesystem::path& path, const std::vector<BerCurve>& curves, const RunManifest& manifest);

inline constexpr double kSvgBerFloor = 1e-7;

void render_svg(std::ostream& os, const std::vector<BerCurve>& curves);
void render_svg(const std::filesystem::path& path, const std::vector<BerCurve>& curves);

/// Runs the built-in invariant checks, one line per check on `out`. Returns
/// true when all pass.
bool run_selftest(std::ostream& out);

/// Full command-line entry point. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linklab
