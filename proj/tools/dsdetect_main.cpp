// dsdetect: batch runner for decentralized-detection performance experiments.
//
//   dsdetect <mode> [--config PATH] [--out PATH] [--seed U64] [--trials U64]
//                   [--workers N] [--spreading PATH] [--save-spreading PATH] [--quiet]
//
// Modes: analyze, asymptotic, montecarlo, converge, sweep-fig1a, sweep-fig1b.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dsdetect/app/config.hpp"
#include "dsdetect/app/runner.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    unsigned workers = 0;
    std::string spreading_path;
    std::string save_spreading_path;
    bool quiet = false;
};

void add_flags(CLI::App& sub, Flags& f) {
    sub.add_option("--config", f.config_path, "JSON experiment configuration")
        ->check(CLI::ExistingFile);
    sub.add_option("--out", f.out_path, "output CSV path (default: standard output)");
    sub.add_option("--seed", f.seed, "master seed, overrides the config");
    sub.add_option("--trials", f.trials, "Monte Carlo trials per hypothesis")
        ->check(CLI::PositiveNumber);
    sub.add_option("--workers", f.workers, "worker threads (0 = all cores); never changes results");
    sub.add_option("--spreading", f.spreading_path, "load the spreading matrix from a CSV file")
        ->check(CLI::ExistingFile);
    sub.add_option("--save-spreading", f.save_spreading_path,
                   "write the spreading matrix used to a CSV file");
    sub.add_flag("--quiet", f.quiet, "suppress progress messages");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dsdetect::app;

    CLI::App app{"Decentralized detection over a shared DS-CDMA channel: exact, asymptotic and "
                 "Monte Carlo performance"};
    app.require_subcommand(1);

    Flags flags;
    for (Mode mode : {Mode::Analyze, Mode::Asymptotic, Mode::MonteCarlo, Mode::Converge,
                      Mode::SweepFig1a, Mode::SweepFig1b}) {
        auto* sub = app.add_subcommand(std::string(to_string(mode)));
        add_flags(*sub, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    const Mode mode = *parse_mode(app.get_subcommands().front()->get_name());

    ExperimentConfig config;
    try {
        std::string text;
        if (flags.config_path.empty()) {
            text = R"({"schema": 1, "mode": ")" + std::string(to_string(mode)) + R"("})";
        } else {
            std::ifstream in(flags.config_path, std::ios::binary);
            if (!in) {
                std::cerr << "error: cannot read " << flags.config_path << '\n';
                return kExitValidation;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        }
        config = parse_config(text);
    } catch (const dsdetect::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    if (config.mode != mode) {
        std::cerr << "error: config mode '" << to_string(config.mode) << "' does not match command '"
                  << to_string(mode) << "'\n";
        return kExitValidation;
    }
    if (flags.seed) config.seed = *flags.seed;
    if (flags.trials) config.trials = *flags.trials;
    config.workers = flags.workers;
    config.output_path = flags.out_path;
    config.spreading_path = flags.spreading_path;
    config.save_spreading_path = flags.save_spreading_path;

    return run(config, std::cout, std::cerr, flags.quiet);
}
