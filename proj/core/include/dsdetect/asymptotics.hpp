#pragma once

#include "dsdetect/detector.hpp"
#include "dsdetect/params.hpp"
#include "dsdetect/report.hpp"

namespace dsdetect {

/// Large-system quantities at load alpha = Ns / N.
///
/// gamma is the per-chip effective interference power, beta0 the almost-sure
/// limit of s_n^T Q_n^{-1} s_n (one signature against the covariance of the
/// other sensors), and 1 / mu the limit of g^2 1^T S^T Sigma^{-1} S 1.
struct AsymptoticParams {
    double alpha;
    double gamma;
    double beta0;
    double mu;
};

/// gamma = (P / N) sigma_v2 / (m^2 + sigma_v2). Throws DomainError when
/// sigma_v2 == 0; use asymptotic_params for the noise-free limit.
double gamma(const SystemParams& params);

/// Positive root of gamma sw2 b^2 + (alpha (gamma + sw2) - gamma) b - alpha = 0.
/// Throws DomainError unless alpha >= 0, gamma > 0, sigma_w2 > 0.
double beta0(double alpha, double gamma, double sigma_w2);

/// gamma -> 0 limit of beta0: 1 / sigma_w2 for every alpha.
double beta0_zero_gamma_limit(double sigma_w2);

/// alpha -> infinity limit of beta0 at fixed gamma: 1 / (gamma + sigma_w2).
/// Only the joint limit gamma -> 0 reaches 1 / sigma_w2.
double beta0_large_alpha_limit(double gamma, double sigma_w2);

/// mu = sigma_v2 / Ns + (m^2 + sigma_v2) / (P beta0). Throws DomainError
/// unless beta0 > 0.
double mu(const SystemParams& params, double beta0);

/// All four quantities. sigma_v2 == 0 takes the explicit zero-gamma path.
AsymptoticParams asymptotic_params(const SystemParams& params);

/// Limiting P_f, P_m, P_e: the exact expressions with g^2 Q_f replaced by 1 / mu.
PerformanceReport asymptotic_performance(const SystemParams& params, const DetectorSpec& spec);

/// P_e at tau' = 0 when alpha -> infinity and gamma -> 0 jointly:
/// Q(sqrt((P / sigma_w2) (1 + sigma_v2 / m^2)^{-1})).
double large_alpha_pe(const SystemParams& params);

/// P_e at tau' = 0 when the whole budget and bandwidth go to one sensor:
/// Q(sqrt(P m^2 / (P sigma_v2 + sigma_w2 (m^2 + sigma_v2)))).
double single_sensor_pe(const SystemParams& params);

}  // namespace dsdetect
