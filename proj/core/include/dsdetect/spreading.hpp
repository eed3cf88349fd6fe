#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace dsdetect {

/// N x Ns matrix of binary signatures, every entry +/- 1/sqrt(N), so each
/// column (one sensor's code) has unit norm. Immutable once built.
class SpreadingMatrix {
public:
    /// Random equiprobable signatures. A pure function of (N, Ns, seed);
    /// columns are drawn from independent per-column streams, so growing Ns
    /// at fixed (N, seed) leaves the earlier columns unchanged.
    static SpreadingMatrix generate(std::int64_t N, std::int64_t Ns, std::uint64_t seed);

    /// Accepts an externally supplied matrix after checking the alphabet.
    /// Entries within 1e-12 (relative) of +/- 1/sqrt(N) are snapped to the
    /// exact value. Throws InvalidSpreadingMatrix naming the first offending
    /// entry.
    static SpreadingMatrix load(const Eigen::MatrixXd& entries);

    std::int64_t N() const noexcept { return entries_.rows(); }
    std::int64_t Ns() const noexcept { return entries_.cols(); }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    auto column(std::int64_t n) const { return entries_.col(n); }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }

    /// Index of the first pair of identical columns, if any.
    std::optional<std::pair<std::int64_t, std::int64_t>> duplicate_columns() const;

private:
    SpreadingMatrix(Eigen::MatrixXd entries, std::optional<std::uint64_t> seed)
        : entries_(std::move(entries)), seed_(seed) {}

    Eigen::MatrixXd entries_;
    std::optional<std::uint64_t> seed_;
};

/// CSV: '#'-prefixed metadata lines (N, Ns, seed, generator), then one line
/// per chip with Ns comma-separated signed entries (17 significant digits).
void write_spreading_csv(std::ostream& out, const SpreadingMatrix& S);

/// Reads the format written by write_spreading_csv. Comment lines are
/// ignored; the matrix is validated through SpreadingMatrix::load.
SpreadingMatrix read_spreading_csv(std::istream& in);

}  // namespace dsdetect
