#include "dsdetect/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include <Eigen/Cholesky>

#include "dsdetect/asymptotics.hpp"
#include "dsdetect/errors.hpp"
#include "dsdetect/exact.hpp"
#include "dsdetect/parallel.hpp"
#include "dsdetect/rng.hpp"

namespace dsdetect {

namespace {

constexpr std::uint64_t kPairStream = 0x5041495253000001ULL;
constexpr std::uint64_t kMaxPairs = 200;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double load_of(const SystemParams& params) {
    const double g = amplifier_gain(params);
    return g * g * params.sigma_v2;
}

Eigen::LLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw NumericalFailure("covariance factorization failed");
    return llt;
}

void check_index(const SpreadingMatrix& S, std::int64_t n) {
    if (n < 0 || n >= S.Ns()) {
        throw std::out_of_range("sensor index " + std::to_string(n) + " outside [0, " +
                                std::to_string(S.Ns()) + ")");
    }
}

void check_shape(const SpreadingMatrix& S, const SystemParams& params) {
    validate(params);
    if (S.N() != params.N || S.Ns() != params.Ns) {
        throw DimensionMismatch("spreading matrix shape does not match parameters");
    }
}

double quad(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& a,
            const Eigen::VectorXd& b) {
    return a.dot(llt.solve(b));
}

ConvergenceRecord make_record(Quantity q, const SystemParams& p, std::uint64_t seed,
                              double observed, double predicted, double residual) {
    const double abs_error = std::abs(observed - predicted);
    const double rel_error = predicted != 0.0 ? abs_error / std::abs(predicted) : kNaN;
    return {q, p.N, p.alpha(), p.Ns, seed, observed, predicted, abs_error, rel_error, residual};
}

// Runs `cell` on every (N, seed) pair in parallel and concatenates the
// per-cell outputs in grid order.
template <typename Cell>
std::vector<ConvergenceRecord> run_grid(const ConvergenceSetup& setup, Cell cell) {
    for (std::size_t i = 1; i < setup.N_list.size(); ++i) {
        if (setup.N_list[i] <= setup.N_list[i - 1]) {
            throw DomainError("N list must be strictly increasing");
        }
    }
    const std::size_t seeds = setup.seeds.size();
    std::vector<std::vector<ConvergenceRecord>> cells(setup.N_list.size() * seeds);
    parallel_for(cells.size(), setup.workers, [&](std::size_t idx) {
        const std::int64_t N = setup.N_list[idx / seeds];
        const std::uint64_t seed = setup.seeds[idx % seeds];
        cells[idx] = cell(params_at(setup, N), seed);
    });
    std::vector<ConvergenceRecord> out;
    for (auto& c : cells) out.insert(out.end(), c.begin(), c.end());
    return out;
}

}  // namespace

std::string_view to_string(Quantity q) noexcept {
    switch (q) {
        case Quantity::DiagonalFull:
            return "diagonal_full";
        case Quantity::DiagonalLeaveOut:
            return "diagonal_leave_out";
        case Quantity::CrossTerm:
            return "cross_term";
        case Quantity::QuadraticForm:
            return "quadratic_form";
    }
    return "unknown";
}

SystemParams params_at(const ConvergenceSetup& setup, std::int64_t N) {
    if (!(setup.alpha > 0.0) || !std::isfinite(setup.alpha)) {
        throw InvalidParam("alpha", setup.alpha, "finite alpha > 0");
    }
    SystemParams p = setup.base;
    p.N = N;
    p.Ns = std::max<std::int64_t>(1, std::llround(setup.alpha * static_cast<double>(N)));
    validate(p);
    return p;
}

Eigen::MatrixXd leave_out_covariance(const SpreadingMatrix& S, const SystemParams& params,
                                     const std::vector<std::int64_t>& removed) {
    check_shape(S, params);
    std::vector<Eigen::Index> kept;
    kept.reserve(static_cast<std::size_t>(S.Ns()));
    for (std::int64_t n = 0; n < S.Ns(); ++n) {
        if (std::find(removed.begin(), removed.end(), n) == removed.end()) kept.push_back(n);
    }
    const Eigen::MatrixXd reduced = S.entries()(Eigen::all, kept);
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(S.N(), S.N()) * params.sigma_w2;
    q.noalias() += load_of(params) * reduced * reduced.transpose();
    return q;
}

double mil_identity_residual(const SpreadingMatrix& S, const SystemParams& params,
                             std::int64_t n) {
    check_shape(S, params);
    check_index(S, n);
    const double load = load_of(params);
    const Eigen::VectorXd s = S.column(n);

    const FusionDetector full(ChannelModel::from_params(params, S));
    const double lhs = s.dot(full.solve(s).col(0));

    const auto leave_out = factor(leave_out_covariance(S, params, {n}));
    const double q = quad(leave_out, s, s);
    return std::abs(lhs - q / (1.0 + load * q));
}

double cross_mil_identity_residual(const SpreadingMatrix& S, const SystemParams& params,
                                   std::int64_t n, std::int64_t k) {
    check_shape(S, params);
    check_index(S, n);
    check_index(S, k);
    if (n == k) throw std::out_of_range("cross identity needs two distinct sensors");
    const double load = load_of(params);
    const Eigen::VectorXd sn = S.column(n);
    const Eigen::VectorXd sk = S.column(k);

    const FusionDetector full(ChannelModel::from_params(params, S));
    const double lhs = sn.dot(full.solve(sk).col(0));

    const auto without_n = factor(leave_out_covariance(S, params, {n}));
    const auto without_both = factor(leave_out_covariance(S, params, {n, k}));
    const double rhs = quad(without_both, sn, sk) /
                       ((1.0 + load * quad(without_n, sn, sn)) *
                        (1.0 + load * quad(without_both, sk, sk)));
    return std::abs(lhs - rhs);
}

double decomposition_residual(const SpreadingMatrix& S, const SystemParams& params) {
    check_shape(S, params);
    const FusionDetector full(ChannelModel::from_params(params, S));
    const Eigen::MatrixXd gram = S.entries().transpose() * full.solve(S.entries());
    const double diagonal = gram.trace();
    const double cross = gram.sum() - diagonal;
    const double qf = full.quadratic_form();
    return std::abs(qf - diagonal - cross) / qf;
}

double mean_abs_cross_term(const SpreadingMatrix& S, const SystemParams& params,
                           std::uint64_t pair_seed) {
    check_shape(S, params);
    if (S.Ns() < 2) throw DomainError("cross terms need at least two sensors");
    if (auto dup = S.duplicate_columns()) {
        throw InvalidSpreadingMatrix(0, static_cast<std::size_t>(dup->second),
                                     "column duplicates column " + std::to_string(dup->first));
    }
    const FusionDetector full(ChannelModel::from_params(params, S));
    const Eigen::MatrixXd gram = S.entries().transpose() * full.solve(S.entries());

    const auto ns = static_cast<std::uint64_t>(S.Ns());
    const std::uint64_t total = ns * (ns - 1);
    const std::uint64_t wanted = std::min(total, kMaxPairs);
    rng::Xoshiro256ss gen(rng::derive_key(pair_seed, {kPairStream}));

    std::vector<std::uint64_t> picks;
    picks.reserve(wanted);
    if (total <= 4 * kMaxPairs) {
        std::vector<std::uint64_t> all(total);
        for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
        for (std::uint64_t i = 0; i < wanted; ++i) {
            std::swap(all[i], all[i + rng::uniform_below(gen, total - i)]);
            picks.push_back(all[i]);
        }
    } else {
        std::unordered_set<std::uint64_t> seen;
        while (picks.size() < wanted) {
            const std::uint64_t idx = rng::uniform_below(gen, total);
            if (seen.insert(idx).second) picks.push_back(idx);
        }
    }

    double sum = 0.0;
    for (const std::uint64_t idx : picks) {
        const auto n = static_cast<Eigen::Index>(idx / (ns - 1));
        auto k = static_cast<Eigen::Index>(idx % (ns - 1));
        if (k >= n) ++k;
        sum += std::abs(gram(n, k));
    }
    return sum / static_cast<double>(picks.size());
}

std::vector<ConvergenceRecord> diagonal_term_experiment(const ConvergenceSetup& setup) {
    return run_grid(setup, [](const SystemParams& p, std::uint64_t seed) {
        const auto S = SpreadingMatrix::generate(p.N, p.Ns, seed);
        const double load = load_of(p);
        const Eigen::VectorXd s = S.column(0);

        const FusionDetector full(ChannelModel::from_params(p, S));
        const double full_term = s.dot(full.solve(s).col(0));
        const double leave_out_term =
            quad(factor(leave_out_covariance(S, p, {0})), s, s);
        const double residual = std::abs(full_term - leave_out_term / (1.0 + load * leave_out_term));

        const double b0 = asymptotic_params(p).beta0;
        return std::vector<ConvergenceRecord>{
            make_record(Quantity::DiagonalFull, p, seed, full_term, 1.0 / (1.0 / b0 + load),
                        residual),
            make_record(Quantity::DiagonalLeaveOut, p, seed, leave_out_term, b0, residual),
        };
    });
}

std::vector<ConvergenceRecord> cross_term_experiment(const ConvergenceSetup& setup) {
    return run_grid(setup, [](const SystemParams& p, std::uint64_t seed) {
        const auto S = SpreadingMatrix::generate(p.N, p.Ns, seed);
        if (S.Ns() < 2 || S.duplicate_columns()) return std::vector<ConvergenceRecord>{};
        const double observed =
            mean_abs_cross_term(S, p, rng::derive_key(seed, {static_cast<std::uint64_t>(p.N)}));
        return std::vector<ConvergenceRecord>{
            make_record(Quantity::CrossTerm, p, seed, observed, 0.0, kNaN)};
    });
}

std::vector<ConvergenceRecord> quadratic_form_convergence(const ConvergenceSetup& setup) {
    return run_grid(setup, [](const SystemParams& p, std::uint64_t seed) {
        const auto S = SpreadingMatrix::generate(p.N, p.Ns, seed);
        const FusionDetector full(ChannelModel::from_params(p, S));
        const double g = full.model().g;
        const double qf = full.quadratic_form();

        const Eigen::MatrixXd gram = S.entries().transpose() * full.solve(S.entries());
        const double diagonal = gram.trace();
        const double residual = std::abs(qf - diagonal - (gram.sum() - diagonal)) / qf;

        return std::vector<ConvergenceRecord>{make_record(
            Quantity::QuadraticForm, p, seed, g * g * qf, 1.0 / asymptotic_params(p).mu, residual)};
    });
}

double median(std::vector<double> values) {
    if (values.empty()) return kNaN;
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

std::vector<ConvergenceSummary> summarize(const std::vector<ConvergenceRecord>& records) {
    std::vector<ConvergenceSummary> out;
    std::vector<std::pair<Quantity, std::int64_t>> keys;
    for (const auto& r : records) {
        const std::pair key{r.quantity, r.N};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [q, N] : keys) {
        std::vector<double> observed;
        std::vector<double> abs_err;
        std::vector<double> rel_err;
        for (const auto& r : records) {
            if (r.quantity != q || r.N != N) continue;
            observed.push_back(r.observed);
            abs_err.push_back(r.abs_error);
            rel_err.push_back(r.rel_error);
        }
        out.push_back({q, N, observed.size(), median(observed), median(abs_err),
                       median(std::move(rel_err))});
    }
    return out;
}

}  // namespace dsdetect
