#pragma once

#include <string_view>

#include "dsdetect/params.hpp"

namespace dsdetect {

enum class Criterion { BayesMinPe, NeymanPearson, Fixed };

std::string_view to_string(Criterion c) noexcept;

/// Fusion-center threshold rule: decide H1 when T(r) >= tau_prime.
///
/// Bayes and Neyman-Pearson thresholds depend on the priors or on the
/// detection gain of the channel at hand, so they are resolved by the
/// analysis that consumes the spec (see resolve_threshold). `tau_prime`
/// is only authoritative for Criterion::Fixed.
struct DetectorSpec {
    Criterion criterion = Criterion::BayesMinPe;
    double tau_prime = 0.0;
    double alpha_fa = 0.0;

    static DetectorSpec bayes() { return {Criterion::BayesMinPe, 0.0, 0.0}; }
    static DetectorSpec neyman_pearson(double alpha_fa);
    static DetectorSpec fixed(double tau_prime);
};

/// tau' = ln(p0 / p1), the minimizer of p0 P_f + p1 P_m for the Gaussian
/// fusion statistic.
double bayes_threshold(double p0, double p1);

/// Threshold giving P_f == alpha_fa for a channel with quadratic form qf.
double np_threshold(double qf, double g, double m, double alpha_fa);

/// Concrete tau' for `spec` on a channel whose detection gain is g^2 * qf.
double resolve_threshold(const DetectorSpec& spec, const SystemParams& params, double g,
                         double qf);

struct ErrorPair {
    double pf;
    double pm;
};

/// False-alarm and miss probabilities of the threshold test for a fusion
/// statistic with conditional means -/+ 2 g^2 m^2 qf and variance 4 g^2 m^2 qf.
ErrorPair threshold_error_probabilities(double tau_prime, double g, double m, double qf);

}  // namespace dsdetect
