#include "dsdetect/asymptotics.hpp"

#include <cmath>
#include <string>

#include "dsdetect/errors.hpp"
#include "dsdetect/gaussian.hpp"

namespace dsdetect {

double gamma(const SystemParams& params) {
    const auto& p = validate(params);
    if (p.sigma_v2 == 0.0) {
        throw DomainError("gamma: sigma_v2 = 0 has no finite-gamma form; use the zero-noise limit");
    }
    return p.P / static_cast<double>(p.N) * p.sigma_v2 / (p.m * p.m + p.sigma_v2);
}

double beta0(double alpha, double gamma, double sigma_w2) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("beta0: alpha must be finite and non-negative");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("beta0: gamma must be finite and positive");
    }
    if (!(sigma_w2 > 0.0) || !std::isfinite(sigma_w2)) {
        throw DomainError("beta0: sigma_w2 must be finite and positive");
    }
    if (alpha == 0.0) return 1.0 / sigma_w2;

    // Quadratic a b^2 + lin b - alpha = 0 with a > 0, alpha > 0. Pick the
    // cancellation-free form of the positive root.
    const double a = gamma * sigma_w2;
    const double lin = alpha * (gamma + sigma_w2) - gamma;
    const double root = std::sqrt(lin * lin + 4.0 * a * alpha);
    if (lin >= 0.0) return 2.0 * alpha / (lin + root);
    return (root - lin) / (2.0 * a);
}

double beta0_zero_gamma_limit(double sigma_w2) {
    if (!(sigma_w2 > 0.0)) throw DomainError("beta0: sigma_w2 must be positive");
    return 1.0 / sigma_w2;
}

double beta0_large_alpha_limit(double gamma, double sigma_w2) {
    if (!(gamma >= 0.0)) throw DomainError("beta0: gamma must be non-negative");
    if (!(sigma_w2 > 0.0)) throw DomainError("beta0: sigma_w2 must be positive");
    return 1.0 / (gamma + sigma_w2);
}

double mu(const SystemParams& params, double beta0) {
    const auto& p = validate(params);
    if (!(beta0 > 0.0)) throw DomainError("mu: beta0 must be positive");
    return p.sigma_v2 / static_cast<double>(p.Ns) + (p.m * p.m + p.sigma_v2) / (p.P * beta0);
}

AsymptoticParams asymptotic_params(const SystemParams& params) {
    const auto& p = validate(params);
    AsymptoticParams out{};
    out.alpha = p.alpha();
    if (p.sigma_v2 == 0.0) {
        out.gamma = 0.0;
        out.beta0 = beta0_zero_gamma_limit(p.sigma_w2);
    } else {
        out.gamma = gamma(p);
        out.beta0 = beta0(out.alpha, out.gamma, p.sigma_w2);
    }
    out.mu = mu(p, out.beta0);
    return out;
}

PerformanceReport asymptotic_performance(const SystemParams& params, const DetectorSpec& spec) {
    const auto asym = asymptotic_params(params);
    // g^2 Q_f -> 1 / mu, so evaluate the finite-size expressions at g = 1,
    // Q_f = 1 / mu.
    const double qf = 1.0 / asym.mu;
    PerformanceReport report;
    report.method = Method::Asymptotic;
    report.tau_prime = resolve_threshold(spec, params, 1.0, qf);
    const auto [pf, pm] = threshold_error_probabilities(report.tau_prime, 1.0, params.m, qf);
    report.pf = pf;
    report.pm = pm;
    report.pe = params.p0 * pf + params.p1 * pm;
    return report;
}

double large_alpha_pe(const SystemParams& params) {
    const auto& p = validate(params);
    return q_function(std::sqrt(p.P / p.sigma_w2 / (1.0 + p.sigma_v2 / (p.m * p.m))));
}

double single_sensor_pe(const SystemParams& params) {
    const auto& p = validate(params);
    const double m2 = p.m * p.m;
    return q_function(std::sqrt(p.P * m2 / (p.P * p.sigma_v2 + p.sigma_w2 * (m2 + p.sigma_v2))));
}

}  // namespace dsdetect
