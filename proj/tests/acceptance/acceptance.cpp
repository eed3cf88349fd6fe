// Acceptance suite. Each criterion prints one line:
//   criterion <k> PASS|FAIL <summary> (<seconds>s)
// Usage: dsdetect_acceptance [--criterion K] [--cli PATH] [--workers N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsdetect/asymptotics.hpp"
#include "dsdetect/convergence.hpp"
#include "dsdetect/exact.hpp"
#include "dsdetect/montecarlo.hpp"

using namespace dsdetect;

namespace {

struct Outcome {
    bool pass;
    std::string summary;
};

struct Options {
    std::string cli_path;
    unsigned workers = 0;
};

SystemParams params(std::int64_t N, std::int64_t Ns, double P = 10.0) {
    SystemParams p;
    p.N = N;
    p.Ns = Ns;
    p.P = P;
    p.m = 1.0;
    p.sigma_v2 = 1.0;
    p.sigma_w2 = 1.0;
    return p;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

Outcome closed_form_vs_monte_carlo(const Options& opt) {
    struct Instance {
        std::int64_t N;
        double alpha;
        double tau;
    };
    const double ln3 = std::log(3.0);
    const std::vector<Instance> instances{
        {4, 0.5, 0.0},  {4, 1.0, ln3},  {4, 2.0, 0.0},  {16, 0.5, ln3}, {16, 1.0, 0.0},
        {16, 2.0, ln3}, {64, 0.5, 0.0}, {64, 1.0, ln3}, {64, 2.0, 0.0}, {64, 2.0, ln3},
    };
    double worst = 0.0;
    int failures = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& in = instances[i];
        const auto Ns = static_cast<std::int64_t>(std::llround(in.alpha * static_cast<double>(in.N)));
        const auto p = params(in.N, Ns, 2.0);
        const auto S = SpreadingMatrix::generate(in.N, Ns, 100 + i);
        const auto spec = DetectorSpec::fixed(in.tau);
        const auto exact = exact_performance(p, S, spec);
        McConfig mc;
        mc.trials_per_hypothesis = 1000000;
        mc.seed = 500 + i;
        mc.workers = opt.workers;
        const auto est = estimate(p, S, spec, mc);
        const double zf = std::abs(est.pf - exact.pf) / est.mc->se_pf;
        const double zm = std::abs(est.pm - exact.pm) / est.mc->se_pm;
        worst = std::max({worst, zf, zm});
        if (!(zf <= 3.0 && zm <= 3.0)) ++failures;
    }
    return {failures == 0, fmt("10 instances, 1e6 trials/hypothesis, worst |z| = %.3f, %g outside 3 SE",
                                worst, failures)};
}

Outcome scalar_chain(const Options& opt) {
    Eigen::MatrixXd one(1, 1);
    one << 1.0;
    const auto S = SpreadingMatrix::load(one);
    const auto p = params(1, 1, 2.0);
    const double exact = exact_performance(p, S, DetectorSpec::fixed(0.0)).pe;
    const double single = single_sensor_pe(p);
    McConfig mc;
    mc.trials_per_hypothesis = 1000000;
    mc.seed = 7;
    mc.workers = opt.workers;
    const auto est = estimate(p, S, DetectorSpec::fixed(0.0), mc);
    const bool closed = std::abs(exact - single) <= 1e-9 && std::abs(exact - 0.23975) <= 5e-6;
    const bool sampled = std::abs(est.pe - exact) <= 3.0 * est.mc->se_pe;
    return {closed && sampled,
            fmt("exact %.12f, single-sensor %.12f, MC %.6f", exact, single, est.pe) +
                fmt(" (SE %.2e)", est.mc->se_pe)};
}

Outcome beta0_correctness(const Options&) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double alpha = 0.01 * std::pow(10.0, 4.0 * i / 9.0);
        for (int j = 0; j < 10; ++j) {
            const double gamma = 0.01 * std::pow(10.0, 4.0 * j / 9.0);
            for (int k = 0; k < 10; ++k) {
                const double sw = 0.01 * std::pow(10.0, 4.0 * k / 9.0);
                const double b = beta0(alpha, gamma, sw);
                const double r =
                    gamma * sw * b * b + (alpha * (gamma + sw) - gamma) * b - alpha;
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    bool zero_exact = true;
    for (double sw : {0.01, 0.3, 1.0, 7.0, 100.0}) {
        for (double gamma : {0.01, 1.0, 100.0}) zero_exact &= beta0(0.0, gamma, sw) == 1.0 / sw;
    }
    const double golden = beta0(1.0, 1.0, 1.0);
    const double golden_err = std::abs(golden - (std::sqrt(5.0) - 1.0) / 2.0);
    return {worst <= 1e-9 && zero_exact && golden_err <= 1e-12,
            fmt("max residual %.2e, golden-ratio error %.2e", worst, golden_err) +
                (zero_exact ? ", alpha=0 exact" : ", alpha=0 NOT exact")};
}

ConvergenceSetup unit_load_setup(std::vector<std::int64_t> N_list, const Options& opt) {
    ConvergenceSetup s;
    s.base = params(8, 8);
    s.alpha = 1.0;
    s.N_list = std::move(N_list);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) s.seeds.push_back(seed);
    s.workers = opt.workers;
    return s;
}

Outcome quadratic_form_convergence_check(const Options& opt) {
    const auto summary = summarize(quadratic_form_convergence(unit_load_setup({8, 32, 128, 512}, opt)));
    bool decreasing = true;
    double at128 = NAN;
    std::string medians;
    for (std::size_t i = 0; i < summary.size(); ++i) {
        if (i > 0 && !(summary[i].median_rel_error < summary[i - 1].median_rel_error)) decreasing = false;
        if (summary[i].N == 128) at128 = summary[i].median_rel_error;
        medians += fmt(i ? ", %.0f:%.4f" : "%.0f:%.4f", static_cast<double>(summary[i].N),
                       summary[i].median_rel_error);
    }
    return {decreasing && at128 < 0.05,
            "median rel. error by N {" + medians + "}" + (decreasing ? ", strictly decreasing" : ", not strictly decreasing") +
                fmt(", N=128 value %.4f vs 0.05", at128)};
}

Outcome appendix_identities(const Options&) {
    double mil = 0.0;
    double cross = 0.0;
    double decomposition = 0.0;
    for (std::int64_t N : {8, 32, 128}) {
        for (double alpha : {0.5, 1.0, 2.0}) {
            const auto Ns = static_cast<std::int64_t>(std::llround(alpha * static_cast<double>(N)));
            const auto p = params(N, Ns);
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const auto S = SpreadingMatrix::generate(N, Ns, seed);
                for (std::int64_t n : {std::int64_t{0}, Ns / 2, Ns - 1}) {
                    mil = std::max(mil, mil_identity_residual(S, p, n));
                }
                if (Ns >= 2) cross = std::max(cross, cross_mil_identity_residual(S, p, 0, Ns - 1));
                decomposition = std::max(decomposition, decomposition_residual(S, p));
            }
        }
    }
    return {mil <= 1e-9 && cross <= 1e-9 && decomposition <= 1e-8,
            fmt("max rank-one residual %.2e, cross %.2e, decomposition %.2e", mil, cross,
                decomposition)};
}

Outcome cross_term_vanishing(const Options& opt) {
    const auto summary = summarize(cross_term_experiment(unit_load_setup({32, 512}, opt)));
    if (summary.size() != 2) return {false, "missing grid cells"};
    const double small = summary[0].median_observed;
    const double large = summary[1].median_observed;
    return {large < 0.5 * small,
            fmt("median at N=32 %.5f, at N=512 %.5f, ratio %.3f", small, large, large / small)};
}

Outcome monotonicity_and_superiority(const Options&) {
    bool monotone = true;
    for (std::int64_t N : {8, 16, 32, 64, 128}) {
        double last = 1.0;
        for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            const auto Ns = std::max<std::int64_t>(1, std::llround(alpha * static_cast<double>(N)));
            const double pe = asymptotic_performance(params(N, Ns), DetectorSpec::bayes()).pe;
            if (pe > last) monotone = false;
            last = pe;
        }
    }
    bool superior = true;
    int sets = 0;
    for (double P : {0.1, 1.0, 10.0, 100.0}) {
        for (double sv : {0.01, 0.1, 1.0, 10.0}) {
            for (double sw : {0.1, 1.0, 10.0}) {
                for (double m : {0.5, 1.0, 2.0}) {
                    SystemParams p = params(16, 16, P);
                    p.sigma_v2 = sv;
                    p.sigma_w2 = sw;
                    p.m = m;
                    superior &= large_alpha_pe(p) < single_sensor_pe(p);
                    ++sets;
                }
            }
        }
    }
    const auto joint = params(1000000, 10000000000LL);
    const double gap = std::abs(asymptotic_performance(joint, DetectorSpec::bayes()).pe - large_alpha_pe(joint));
    return {monotone && superior && gap <= 1e-3,
            std::string(monotone ? "non-increasing in alpha" : "NOT non-increasing in alpha") +
                fmt(", large-alpha < single-sensor on %g/%g sets", superior ? sets : 0.0, sets) +
                fmt(", joint-limit gap %.2e", gap)};
}

std::string csv_body(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream body;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# created=", 0) == 0) continue;
        body << line << '\n';
    }
    return body.str();
}

Outcome reproducibility(const Options& opt) {
    if (opt.cli_path.empty()) return {false, "no --cli executable given"};
    const auto dir = std::filesystem::temp_directory_path() / "dsdetect_acceptance";
    std::filesystem::create_directories(dir);
    const auto config = dir / "fig1a.json";
    std::ofstream(config) << R"({"schema": 1, "mode": "sweep-fig1a", "seed": 2024,
  "grid": {"N": [8, 16, 32, 64], "alpha": [0.5, 1, 2, 4], "replicates": 3}})";

    std::vector<std::string> bodies;
    for (const auto& [name, workers] : std::vector<std::pair<std::string, int>>{
             {"a.csv", 1}, {"b.csv", 1}, {"c.csv", 4}}) {
        const auto out = dir / name;
        std::filesystem::remove(out);
        const std::string cmd = "\"" + opt.cli_path + "\" sweep-fig1a --quiet --config \"" +
                                config.string() + "\" --out \"" + out.string() +
                                "\" --workers " + std::to_string(workers);
        if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
        bodies.push_back(csv_body(out));
    }
    const bool same_runs = bodies[0] == bodies[1] && !bodies[0].empty();
    const bool same_workers = bodies[0] == bodies[2];
    return {same_runs && same_workers,
            std::string("repeat run ") + (same_runs ? "identical" : "DIFFERS") +
                ", 4 workers vs 1 " + (same_workers ? "identical" : "DIFFERS") +
                fmt(" (%g bytes)", static_cast<double>(bodies[0].size()))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dsdetect acceptance suite"};
    int only = 0;
    Options opt;
    app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
    app.add_option("--cli", opt.cli_path, "path of the dsdetect executable");
    app.add_option("--workers", opt.workers, "worker threads (0 = all cores)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome(const Options&)>> criteria{
        closed_form_vs_monte_carlo, scalar_chain,         beta0_correctness,
        quadratic_form_convergence_check, appendix_identities, cross_term_vanishing,
        monotonicity_and_superiority, reproducibility,
    };

    // Wall-clock budgets in seconds; 0 means none.
    const std::vector<double> budget{300.0, 0.0, 0.0, 120.0, 0.0, 0.0, 0.0, 0.0};

    int failed = 0;
    for (std::size_t k = 1; k <= criteria.size(); ++k) {
        if (only != 0 && static_cast<std::size_t>(only) != k) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[k - 1](opt);
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget[k - 1] > 0.0 && seconds > budget[k - 1]) {
            outcome.pass = false;
            outcome.summary += fmt(", over the %.0fs budget", budget[k - 1]);
        }
        std::printf("criterion %zu %s %s (%.1fs)\n", k, outcome.pass ? "PASS" : "FAIL",
                    outcome.summary.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
