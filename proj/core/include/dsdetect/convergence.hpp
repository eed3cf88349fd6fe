#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dsdetect/params.hpp"
#include "dsdetect/spreading.hpp"

namespace dsdetect {

enum class Quantity {
    DiagonalFull,      // s_1^T Sigma^{-1} s_1
    DiagonalLeaveOut,  // s_1^T Q_1^{-1} s_1, Q_1 built without column 1
    CrossTerm,         // mean |s_n^T Sigma^{-1} s_n'| over sampled n != n'
    QuadraticForm,     // g^2 1^T S^T Sigma^{-1} S 1
};

std::string_view to_string(Quantity q) noexcept;

/// One measurement on one random code matrix against its large-system limit.
/// rel_error is NaN when the predicted limit is zero.
/// identity_residual carries the exact-identity check made on the same
/// matrix (rank-one inversion residual for the diagonal terms, relative
/// decomposition residual for the quadratic form), or NaN when none applies.
struct ConvergenceRecord {
    Quantity quantity;
    std::int64_t N;
    double alpha;
    std::int64_t Ns;
    std::uint64_t seed;
    double observed;
    double predicted;
    double abs_error;
    double rel_error;
    double identity_residual;
};

/// Grid of an experiment. At each N the load is Ns = max(1, round(alpha N));
/// every other parameter is taken from `base`. Each (N, seed) cell draws
/// SpreadingMatrix::generate(N, Ns, seed).
struct ConvergenceSetup {
    SystemParams base;
    double alpha = 1.0;
    std::vector<std::int64_t> N_list;
    std::vector<std::uint64_t> seeds;
    unsigned workers = 0;
};

/// `base` resized to N chips at the setup's load.
SystemParams params_at(const ConvergenceSetup& setup, std::int64_t N);

/// Covariance of the received signal with the listed sensors removed:
/// g^2 sigma_v2 S_{-A} S_{-A}^T + sigma_w2 I.
Eigen::MatrixXd leave_out_covariance(const SpreadingMatrix& S, const SystemParams& params,
                                     const std::vector<std::int64_t>& removed);

/// |s_n^T Sigma^{-1} s_n - q / (1 + g^2 sigma_v2 q)| with q = s_n^T Q_n^{-1} s_n.
/// n is zero-based; throws std::out_of_range.
double mil_identity_residual(const SpreadingMatrix& S, const SystemParams& params,
                             std::int64_t n);

/// Residual of the two-step rank-one identity for an off-diagonal term:
/// s_n^T Sigma^{-1} s_k = s_n^T Q_{n,k}^{-1} s_k /
///     ((1 + g^2 sigma_v2 s_n^T Q_n^{-1} s_n)(1 + g^2 sigma_v2 s_k^T Q_{n,k}^{-1} s_k)).
double cross_mil_identity_residual(const SpreadingMatrix& S, const SystemParams& params,
                                   std::int64_t n, std::int64_t k);

/// |Q_f - sum of diagonal terms - sum of cross terms| / Q_f, with Q_f from
/// the direct solve against S 1 and the terms from S^T Sigma^{-1} S.
double decomposition_residual(const SpreadingMatrix& S, const SystemParams& params);

/// Mean |s_n^T Sigma^{-1} s_k| over min(Ns (Ns - 1), 200) ordered pairs
/// n != k sampled without replacement from a stream keyed by pair_seed.
/// Throws InvalidSpreadingMatrix when S has two identical columns.
double mean_abs_cross_term(const SpreadingMatrix& S, const SystemParams& params,
                           std::uint64_t pair_seed);

std::vector<ConvergenceRecord> diagonal_term_experiment(const ConvergenceSetup& setup);

/// Cells whose random matrix has duplicate columns are skipped.
std::vector<ConvergenceRecord> cross_term_experiment(const ConvergenceSetup& setup);

std::vector<ConvergenceRecord> quadratic_form_convergence(const ConvergenceSetup& setup);

struct ConvergenceSummary {
    Quantity quantity;
    std::int64_t N;
    std::size_t count;
    double median_observed;
    double median_abs_error;
    double median_rel_error;
};

/// Medians per (quantity, N), in first-appearance order.
std::vector<ConvergenceSummary> summarize(const std::vector<ConvergenceRecord>& records);

double median(std::vector<double> values);

}  // namespace dsdetect
