#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsdetect/detector.hpp"
#include "dsdetect/errors.hpp"
#include "dsdetect/params.hpp"

namespace dsdetect::app {

inline constexpr int kSchemaVersion = 1;

enum class Mode { Analyze, Asymptotic, MonteCarlo, Converge, SweepFig1a, SweepFig1b };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view name) noexcept;

/// True for modes that take their N / alpha values from the grid.
bool is_grid_mode(Mode mode) noexcept;

/// Configuration problem, reported with the JSON line (syntax errors) or
/// the dotted field path (schema errors) it concerns.
class ParseError : public ValidationError {
public:
    ParseError(std::string context, const std::string& message)
        : ValidationError(context + ": " + message), context_(std::move(context)) {}

    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

/// Physical parameters as written in the config. N and one of alpha / Ns
/// are required by the single-point modes and forbidden by the grid modes.
struct ParamsSpec {
    std::optional<std::int64_t> N;
    std::optional<double> alpha;
    std::optional<std::int64_t> Ns;
    double P = 10.0;
    double m = 1.0;
    double sigma_v2 = 1.0;
    double sigma_w2 = 1.0;
    double p0 = 0.5;
};

struct GridSpec {
    std::vector<std::int64_t> N;
    std::vector<double> alpha;
    /// Random matrices (seeds) per grid cell.
    std::uint64_t replicates = 1;
};

struct ExperimentConfig {
    int schema = kSchemaVersion;
    Mode mode = Mode::Asymptotic;
    ParamsSpec params;
    DetectorSpec detector = DetectorSpec::bayes();
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    GridSpec grid;
    unsigned workers = 0;
    std::string output_path;
    std::string spreading_path;
    std::string save_spreading_path;
};

/// Strict parse of the JSON schema. Unknown and duplicate keys are errors,
/// grid lists must be strictly ascending. Defaults: p0 = p1 = 0.5, Bayes
/// criterion, P = 10, m = sigma_v2 = sigma_w2 = 1, 1e5 trials, seed 1.
/// Grid modes default to N {8, 16, 32, 64, 128} x alpha {0.5, 1, 2, 4}
/// (sweeps) or N {8, 32, 128, 512} x alpha {1} with 20 replicates (converge).
ExperimentConfig parse_config(std::string_view text);

/// Single-point system parameters; throws ParseError if N or the load is
/// missing, InvalidParam if a value is out of range.
SystemParams system_params(const ExperimentConfig& config);

/// Parameters for one grid cell: Ns = max(1, round(alpha N)).
SystemParams system_params_at(const ExperimentConfig& config, std::int64_t N, double alpha);

}  // namespace dsdetect::app
