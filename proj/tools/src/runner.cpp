#include "dsdetect/app/runner.hpp"

#include <bit>
#include <cmath>
#include <ctime>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include "dsdetect/asymptotics.hpp"
#include "dsdetect/convergence.hpp"
#include "dsdetect/exact.hpp"
#include "dsdetect/montecarlo.hpp"
#include "dsdetect/parallel.hpp"
#include "dsdetect/rng.hpp"
#include "dsdetect/spreading.hpp"

namespace dsdetect::app {

namespace {

constexpr std::uint64_t kFig1aCell = 0x4649473141000001ULL;
constexpr std::uint64_t kConvergeSeed = 0x434F4E5645520001ULL;

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ';';
        out += fmt(values[i]);
    }
    return out;
}

void add_common_metadata(CsvTable& t, const ExperimentConfig& c) {
    const auto& p = c.params;
    t.metadata = {
        {"artifact", kArtifactVersion},
        {"schema", std::to_string(c.schema)},
        {"mode", std::string(to_string(c.mode))},
        {"P", fmt(p.P)},
        {"m", fmt(p.m)},
        {"sigma_v2", fmt(p.sigma_v2)},
        {"sigma_w2", fmt(p.sigma_w2)},
        {"p0", fmt(p.p0)},
        {"p1", fmt(1.0 - p.p0)},
        {"criterion", std::string(to_string(c.detector.criterion))},
    };
    if (c.detector.criterion == Criterion::NeymanPearson) {
        t.metadata.emplace_back("alpha_fa", fmt(c.detector.alpha_fa));
    } else if (c.detector.criterion == Criterion::Fixed) {
        t.metadata.emplace_back("tau_prime", fmt(c.detector.tau_prime));
    }
    t.metadata.emplace_back("seed", fmt(c.seed));
    t.metadata.emplace_back("generator", std::string(rng::kGeneratorId));
    t.metadata.emplace_back("gaussian", std::string(rng::kGaussianId));
}

std::vector<std::string> param_cells(const SystemParams& p) {
    return {fmt(p.N),  fmt(p.Ns),       fmt(p.alpha()),   fmt(p.P), fmt(p.m),
            fmt(p.sigma_v2), fmt(p.sigma_w2), fmt(p.p0), fmt(p.p1)};
}

const std::vector<std::string> kParamColumns = {"N",  "Ns",       "alpha",    "P", "m",
                                                "sigma_v2", "sigma_w2", "p0", "p1"};

void append(std::vector<std::string>& dst, const std::vector<std::string>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

SpreadingMatrix matrix_for(const ExperimentConfig& c, SystemParams& p) {
    if (c.spreading_path.empty()) return SpreadingMatrix::generate(p.N, p.Ns, c.seed);
    std::ifstream in(c.spreading_path);
    if (!in) throw ValidationError("cannot open spreading matrix file " + c.spreading_path);
    auto S = read_spreading_csv(in);
    if (S.N() != p.N || S.Ns() != p.Ns) {
        throw DimensionMismatch("spreading matrix file is " + std::to_string(S.N()) + " x " +
                                std::to_string(S.Ns()) + ", parameters require " +
                                std::to_string(p.N) + " x " + std::to_string(p.Ns));
    }
    return S;
}

SystemParams point_params(const ExperimentConfig& c) {
    if (!c.spreading_path.empty() && !c.params.N) {
        // Take the shape from the matrix file.
        std::ifstream in(c.spreading_path);
        if (!in) throw ValidationError("cannot open spreading matrix file " + c.spreading_path);
        const auto S = read_spreading_csv(in);
        ExperimentConfig shaped = c;
        shaped.params.N = S.N();
        shaped.params.Ns = S.Ns();
        shaped.params.alpha.reset();
        return system_params(shaped);
    }
    return system_params(c);
}

void save_matrix(const ExperimentConfig& c, const SpreadingMatrix& S) {
    if (c.save_spreading_path.empty()) return;
    std::ostringstream os;
    write_spreading_csv(os, S);
    write_file_atomic(c.save_spreading_path, os.str());
}

std::string matrix_seed(const SpreadingMatrix& S) {
    return S.seed() ? fmt(*S.seed()) : std::string("none");
}

CsvTable analyze(const ExperimentConfig& c) {
    SystemParams p = point_params(c);
    const auto S = matrix_for(c, p);
    save_matrix(c, S);
    const FusionDetector det(ChannelModel::from_params(p, S));
    const auto report = exact_performance(p, S, c.detector);

    CsvTable t;
    add_common_metadata(t, c);
    t.columns = kParamColumns;
    append(t.columns, {"matrix_seed", "criterion", "tau_prime", "g", "quadratic_form", "pf", "pm",
                       "pe", "method"});
    auto row = param_cells(p);
    append(row, {matrix_seed(S), std::string(to_string(c.detector.criterion)),
                 fmt(report.tau_prime), fmt(det.model().g), fmt(det.quadratic_form()),
                 fmt(report.pf), fmt(report.pm), fmt(report.pe),
                 std::string(to_string(report.method))});
    t.rows.push_back(std::move(row));
    return t;
}

CsvTable asymptotic(const ExperimentConfig& c) {
    const SystemParams p = system_params(c);
    const auto a = asymptotic_params(p);
    const auto report = asymptotic_performance(p, c.detector);

    CsvTable t;
    add_common_metadata(t, c);
    t.columns = kParamColumns;
    append(t.columns, {"criterion", "tau_prime", "gamma", "beta0", "mu", "pf", "pm", "pe",
                       "pe_large_alpha_eq10", "pe_single_sensor_eq11", "method"});
    auto row = param_cells(p);
    append(row, {std::string(to_string(c.detector.criterion)), fmt(report.tau_prime),
                 fmt(a.gamma), fmt(a.beta0), fmt(a.mu), fmt(report.pf), fmt(report.pm),
                 fmt(report.pe), fmt(large_alpha_pe(p)), fmt(single_sensor_pe(p)),
                 std::string(to_string(report.method))});
    t.rows.push_back(std::move(row));
    return t;
}

CsvTable montecarlo(const ExperimentConfig& c) {
    SystemParams p = point_params(c);
    const auto S = matrix_for(c, p);
    save_matrix(c, S);
    const auto exact = exact_performance(p, S, c.detector);
    const auto mc = estimate(p, S, c.detector, McConfig{c.trials, c.seed, c.workers});
    const auto& stats = *mc.mc;

    CsvTable t;
    add_common_metadata(t, c);
    t.metadata.emplace_back("trials", fmt(c.trials));
    t.columns = kParamColumns;
    append(t.columns, {"matrix_seed", "mc_seed", "criterion", "tau_prime", "trials", "pf_mc",
                       "pm_mc", "pe_mc", "se_pf", "se_pm", "se_pe", "pf_exact", "pm_exact",
                       "pe_exact"});
    auto row = param_cells(p);
    append(row, {matrix_seed(S), fmt(stats.seed), std::string(to_string(c.detector.criterion)),
                 fmt(mc.tau_prime), fmt(stats.trials_per_hypothesis), fmt(mc.pf), fmt(mc.pm),
                 fmt(mc.pe), fmt(stats.se_pf), fmt(stats.se_pm), fmt(stats.se_pe), fmt(exact.pf),
                 fmt(exact.pm), fmt(exact.pe)});
    t.rows.push_back(std::move(row));
    return t;
}

void add_grid_metadata(CsvTable& t, const ExperimentConfig& c) {
    t.metadata.emplace_back("grid_N", join(c.grid.N));
    t.metadata.emplace_back("grid_alpha", join(c.grid.alpha));
    t.metadata.emplace_back("replicates", fmt(c.grid.replicates));
}

CsvTable converge(const ExperimentConfig& c) {
    CsvTable t;
    add_common_metadata(t, c);
    add_grid_metadata(t, c);
    t.columns = {"quantity", "N",         "alpha",     "Ns",        "seed",
                 "observed", "predicted", "abs_error", "rel_error", "identity_residual",
                 "P",        "m",         "sigma_v2",  "sigma_w2"};

    std::vector<std::uint64_t> seeds;
    for (std::uint64_t r = 0; r < c.grid.replicates; ++r) {
        seeds.push_back(rng::derive_key(c.seed, {kConvergeSeed, r}));
    }
    for (const double alpha : c.grid.alpha) {
        ConvergenceSetup setup;
        setup.base = system_params_at(c, c.grid.N.front(), alpha);
        setup.alpha = alpha;
        setup.N_list = c.grid.N;
        setup.seeds = seeds;
        setup.workers = c.workers;

        std::vector<ConvergenceRecord> records = quadratic_form_convergence(setup);
        const auto diagonal = diagonal_term_experiment(setup);
        const auto cross = cross_term_experiment(setup);
        records.insert(records.end(), diagonal.begin(), diagonal.end());
        records.insert(records.end(), cross.begin(), cross.end());
        for (const auto& r : records) {
            t.rows.push_back({std::string(to_string(r.quantity)), fmt(r.N), fmt(alpha), fmt(r.Ns),
                              fmt(r.seed), fmt(r.observed), fmt(r.predicted), fmt(r.abs_error),
                              fmt(r.rel_error), fmt(r.identity_residual), fmt(setup.base.P),
                              fmt(setup.base.m), fmt(setup.base.sigma_v2),
                              fmt(setup.base.sigma_w2)});
        }
    }
    return t;
}

CsvTable sweep_fig1a(const ExperimentConfig& c) {
    CsvTable t;
    add_common_metadata(t, c);
    add_grid_metadata(t, c);
    t.columns = {"N",         "alpha", "Ns", "seed",     "pe_exact", "pe_asymptotic",
                 "rel_gap",   "replicate", "P", "m", "sigma_v2", "sigma_w2",
                 "p0",        "tau_prime"};

    const std::size_t n_alpha = c.grid.alpha.size();
    const std::size_t reps = c.grid.replicates;
    std::vector<std::vector<std::string>> rows(c.grid.N.size() * n_alpha * reps);
    parallel_for(rows.size(), c.workers, [&](std::size_t idx) {
        const std::int64_t N = c.grid.N[idx / (n_alpha * reps)];
        const double alpha = c.grid.alpha[(idx / reps) % n_alpha];
        const std::uint64_t rep = idx % reps;
        const SystemParams p = system_params_at(c, N, alpha);
        const std::uint64_t seed = rng::derive_key(
            c.seed, {kFig1aCell, static_cast<std::uint64_t>(N), std::bit_cast<std::uint64_t>(alpha),
                     rep});
        const auto S = SpreadingMatrix::generate(p.N, p.Ns, seed);
        const auto exact = exact_performance(p, S, c.detector);
        const auto asym = asymptotic_performance(p, c.detector);
        rows[idx] = {fmt(N),        fmt(alpha),          fmt(p.Ns),
                     fmt(seed),     fmt(exact.pe),       fmt(asym.pe),
                     fmt((exact.pe - asym.pe) / asym.pe), fmt(rep),
                     fmt(p.P),      fmt(p.m),            fmt(p.sigma_v2),
                     fmt(p.sigma_w2), fmt(p.p0),         fmt(exact.tau_prime)};
    });
    t.rows = std::move(rows);
    return t;
}

CsvTable sweep_fig1b(const ExperimentConfig& c) {
    CsvTable t;
    add_common_metadata(t, c);
    add_grid_metadata(t, c);
    t.columns = {"N", "alpha", "pe_asymptotic", "pe_large_alpha_eq10", "pe_single_sensor_eq11",
                 "Ns", "P", "m", "sigma_v2", "sigma_w2", "p0", "tau_prime"};
    for (const std::int64_t N : c.grid.N) {
        for (const double alpha : c.grid.alpha) {
            const SystemParams p = system_params_at(c, N, alpha);
            const auto asym = asymptotic_performance(p, c.detector);
            t.rows.push_back({fmt(N), fmt(alpha), fmt(asym.pe), fmt(large_alpha_pe(p)),
                              fmt(single_sensor_pe(p)), fmt(p.Ns), fmt(p.P), fmt(p.m),
                              fmt(p.sigma_v2), fmt(p.sigma_w2), fmt(p.p0), fmt(asym.tau_prime)});
        }
    }
    return t;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

CsvTable execute(const ExperimentConfig& config) {
    switch (config.mode) {
        case Mode::Analyze:
            return analyze(config);
        case Mode::Asymptotic:
            return asymptotic(config);
        case Mode::MonteCarlo:
            return montecarlo(config);
        case Mode::Converge:
            return converge(config);
        case Mode::SweepFig1a:
            return sweep_fig1a(config);
        case Mode::SweepFig1b:
            return sweep_fig1b(config);
    }
    throw ValidationError("unknown mode");
}

std::string render(const CsvTable& table, const std::optional<std::string>& created) {
    std::string out;
    if (created) out += "# created=" + *created + "\n";
    for (const auto& [key, value] : table.metadata) out += "# " + key + "=" + value + "\n";
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(table.columns);
    for (const auto& row : table.rows) line(row);
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot move output into place at " + path);
    }
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err, bool quiet) {
    try {
        const CsvTable table = execute(config);

        char stamp[32] = "unknown";
        const std::time_t now = std::time(nullptr);
        std::tm utc{};
        if (gmtime_r(&now, &utc)) std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
        const std::string text = render(table, std::string(stamp));

        if (config.output_path.empty()) {
            out << text;
        } else {
            write_file_atomic(config.output_path, text);
            if (!quiet) {
                err << "wrote " << table.rows.size() << " rows to " << config.output_path << '\n';
            }
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace dsdetect::app
