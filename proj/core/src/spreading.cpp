#include "dsdetect/spreading.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "dsdetect/errors.hpp"
#include "dsdetect/rng.hpp"

namespace dsdetect {

namespace {

constexpr std::uint64_t kSpreadingStream = 0x5350524541440001ULL;

}  // namespace

SpreadingMatrix SpreadingMatrix::generate(std::int64_t N, std::int64_t Ns, std::uint64_t seed) {
    if (N < 1 || Ns < 1) {
        throw DomainError("spreading matrix dimensions must be positive, got " +
                          std::to_string(N) + " x " + std::to_string(Ns));
    }
    const double amplitude = 1.0 / std::sqrt(static_cast<double>(N));
    Eigen::MatrixXd entries(N, Ns);
    for (std::int64_t n = 0; n < Ns; ++n) {
        rng::Xoshiro256ss gen(
            rng::derive_key(seed, {kSpreadingStream, static_cast<std::uint64_t>(n)}));
        std::uint64_t word = 0;
        for (std::int64_t i = 0; i < N; ++i) {
            if (i % 64 == 0) word = gen();
            entries(i, n) = ((word >> (i % 64)) & 1U) ? amplitude : -amplitude;
        }
    }
    return SpreadingMatrix(std::move(entries), seed);
}

SpreadingMatrix SpreadingMatrix::load(const Eigen::MatrixXd& source) {
    if (source.rows() < 1 || source.cols() < 1) {
        throw InvalidSpreadingMatrix(0, 0, "matrix is empty");
    }
    const double amplitude = 1.0 / std::sqrt(static_cast<double>(source.rows()));
    Eigen::MatrixXd entries(source.rows(), source.cols());
    for (Eigen::Index j = 0; j < source.cols(); ++j) {
        for (Eigen::Index i = 0; i < source.rows(); ++i) {
            const double v = source(i, j);
            if (!std::isfinite(v) || std::abs(std::abs(v) - amplitude) > 1e-12 * amplitude) {
                throw InvalidSpreadingMatrix(static_cast<std::size_t>(i),
                                             static_cast<std::size_t>(j),
                                             "entry " + std::to_string(v) +
                                                 " is not +/-1/sqrt(N)");
            }
            entries(i, j) = v > 0.0 ? amplitude : -amplitude;
        }
    }
    return SpreadingMatrix(std::move(entries), std::nullopt);
}

std::optional<std::pair<std::int64_t, std::int64_t>> SpreadingMatrix::duplicate_columns() const {
    for (std::int64_t a = 0; a < Ns(); ++a) {
        for (std::int64_t b = a + 1; b < Ns(); ++b) {
            if (entries_.col(a) == entries_.col(b)) return std::pair{a, b};
        }
    }
    return std::nullopt;
}

void write_spreading_csv(std::ostream& out, const SpreadingMatrix& S) {
    out << "# N=" << S.N() << '\n';
    out << "# Ns=" << S.Ns() << '\n';
    if (S.seed()) {
        out << "# seed=" << *S.seed() << '\n';
    } else {
        out << "# seed=none\n";
    }
    out << "# generator=" << rng::kGeneratorId << '\n';
    char buf[32];
    for (std::int64_t i = 0; i < S.N(); ++i) {
        for (std::int64_t j = 0; j < S.Ns(); ++j) {
            if (j > 0) out << ',';
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, S.entries()(i, j),
                                           std::chars_format::general, 17);
            out.write(buf, end - buf);
        }
        out << '\n';
    }
}

SpreadingMatrix read_spreading_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t stop = line.find(',', start);
            if (stop == std::string::npos) stop = line.size();
            const char* first = line.data() + start;
            const char* last = line.data() + stop;
            while (first < last && *first == ' ') ++first;
            if (first < last && *first == '+') ++first;
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last) {
                throw InvalidSpreadingMatrix(rows.size(), row.size(),
                                             "unparseable entry '" +
                                                 line.substr(start, stop - start) + "'");
            }
            row.push_back(value);
            start = stop + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InvalidSpreadingMatrix(rows.size(), row.size(), "ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidSpreadingMatrix(0, 0, "no matrix rows");

    Eigen::MatrixXd entries(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return SpreadingMatrix::load(entries);
}

}  // namespace dsdetect
