#include "dsdetect/gaussian.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dsdetect/errors.hpp"

namespace dsdetect {

double q_function(double x) noexcept {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

namespace {

// Acklam's rational approximation to the lower-tail normal quantile,
// relative error about 1.15e-9 over (0, 1).
double acklam_lower_quantile(double p) {
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double inv_q(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("inv_q: probability must lie in (0, 1), got " + std::to_string(p));
    }
    // Q(x) = p  <=>  Phi(-x) = p.
    double x = -acklam_lower_quantile(p);

    // Halley steps on f(x) = Q(x) - p, f' = -phi, f'' = x phi.
    for (int iter = 0; iter < 3; ++iter) {
        const double f = q_function(x) - p;
        const double pdf = normal_pdf(x);
        if (pdf == 0.0) break;
        const double u = -f / pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }

    if (std::abs(q_function(x) - p) <= 1e-12) return x;

    // Fallback: bisection on a bracket around the rational seed.
    double lo = x - 1.0;
    double hi = x + 1.0;
    while (q_function(lo) < p) lo -= 1.0;
    while (q_function(hi) > p) hi += 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * (1.0 + std::abs(x)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace dsdetect
