#include "dsdetect/detector.hpp"

#include <cmath>
#include <string>

#include "dsdetect/errors.hpp"
#include "dsdetect/gaussian.hpp"

namespace dsdetect {

std::string_view to_string(Criterion c) noexcept {
    switch (c) {
        case Criterion::BayesMinPe:
            return "bayes";
        case Criterion::NeymanPearson:
            return "np";
        case Criterion::Fixed:
            return "fixed";
    }
    return "unknown";
}

DetectorSpec DetectorSpec::neyman_pearson(double alpha_fa) {
    if (!(alpha_fa > 0.0 && alpha_fa < 1.0)) {
        throw DomainError("Neyman-Pearson false-alarm level must lie in (0, 1), got " +
                          std::to_string(alpha_fa));
    }
    return {Criterion::NeymanPearson, 0.0, alpha_fa};
}

DetectorSpec DetectorSpec::fixed(double tau_prime) {
    if (std::isnan(tau_prime)) throw DomainError("fixed threshold must not be NaN");
    return {Criterion::Fixed, tau_prime, 0.0};
}

double bayes_threshold(double p0, double p1) {
    if (!(p0 > 0.0 && p0 < 1.0 && p1 > 0.0 && p1 < 1.0) || std::abs(p0 + p1 - 1.0) > 1e-12) {
        throw DomainError("bayes_threshold: priors must lie in (0, 1) and sum to 1");
    }
    return std::log(p0 / p1);
}

double np_threshold(double qf, double g, double m, double alpha_fa) {
    if (!(qf > 0.0)) throw DomainError("np_threshold: quadratic form must be positive");
    if (!(alpha_fa > 0.0 && alpha_fa < 1.0)) {
        throw DomainError("np_threshold: alpha_fa must lie in (0, 1)");
    }
    return 2.0 * g * m * std::sqrt(qf) * inv_q(alpha_fa) - 2.0 * g * g * m * m * qf;
}

double resolve_threshold(const DetectorSpec& spec, const SystemParams& params, double g,
                         double qf) {
    switch (spec.criterion) {
        case Criterion::BayesMinPe:
            return bayes_threshold(params.p0, params.p1);
        case Criterion::NeymanPearson:
            return np_threshold(qf, g, params.m, spec.alpha_fa);
        case Criterion::Fixed:
            return spec.tau_prime;
    }
    throw DomainError("unknown detection criterion");
}

ErrorPair threshold_error_probabilities(double tau_prime, double g, double m, double qf) {
    if (qf == 0.0) {
        // S 1 = 0: the statistic is identically zero.
        return tau_prime <= 0.0 ? ErrorPair{1.0, 0.0} : ErrorPair{0.0, 1.0};
    }
    const double mean_gap = 2.0 * g * g * m * m * qf;
    const double sd = 2.0 * g * m * std::sqrt(qf);
    return {q_function((tau_prime + mean_gap) / sd), q_function((mean_gap - tau_prime) / sd)};
}

}  // namespace dsdetect
