#include "dsdetect/params.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dsdetect/errors.hpp"

namespace dsdetect {

InvalidParam::InvalidParam(std::string name, double value, std::string constraint)
    : ValidationError("invalid parameter " + name + " = " + std::to_string(value) +
                      ": requires " + constraint),
      name_(std::move(name)),
      value_(value),
      constraint_(std::move(constraint)) {}

InvalidSpreadingMatrix::InvalidSpreadingMatrix(std::size_t row, std::size_t col,
                                               std::string reason)
    : ValidationError("invalid spreading matrix at (" + std::to_string(row) + ", " +
                      std::to_string(col) + "): " + reason),
      row_(row),
      col_(col) {}

namespace {

void require(bool ok, const char* name, double value, const char* constraint) {
    if (!ok) throw InvalidParam(name, value, constraint);
}

}  // namespace

const SystemParams& validate(const SystemParams& p) {
    require(p.N >= 1, "N", static_cast<double>(p.N), "N >= 1");
    require(p.Ns >= 1, "Ns", static_cast<double>(p.Ns), "Ns >= 1");
    require(std::isfinite(p.P) && p.P > 0.0, "P", p.P, "finite P > 0");
    require(std::isfinite(p.m) && p.m > 0.0, "m", p.m, "finite m > 0");
    require(std::isfinite(p.sigma_v2) && p.sigma_v2 >= 0.0, "sigma_v2", p.sigma_v2,
            "finite sigma_v2 >= 0");
    require(std::isfinite(p.sigma_w2) && p.sigma_w2 > 0.0, "sigma_w2", p.sigma_w2,
            "finite sigma_w2 > 0");
    require(std::isfinite(p.p0) && p.p0 > 0.0 && p.p0 < 1.0, "p0", p.p0, "0 < p0 < 1");
    require(std::isfinite(p.p1) && std::abs(p.p0 + p.p1 - 1.0) <= 1e-12, "p1", p.p1,
            "p0 + p1 = 1");
    return p;
}

double amplifier_gain(const SystemParams& params) {
    const auto& p = validate(params);
    return std::sqrt(p.P / (static_cast<double>(p.Ns) * (p.m * p.m + p.sigma_v2)));
}

}  // namespace dsdetect
