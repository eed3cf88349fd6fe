#pragma once

#include <cstdint>

namespace dsdetect {

/// Scalar model of the sensor network: N chips of spreading, Ns amplify-and-
/// forward sensors sharing a total power budget P, signal amplitude m under
/// +/- hypotheses, observation noise sigma_v2 per sensor and receiver noise
/// sigma_w2 per chip.
struct SystemParams {
    std::int64_t N = 1;
    std::int64_t Ns = 1;
    double P = 1.0;
    double m = 1.0;
    double sigma_v2 = 1.0;
    double sigma_w2 = 1.0;
    double p0 = 0.5;
    double p1 = 0.5;

    /// Load ratio Ns / N.
    double alpha() const noexcept { return static_cast<double>(Ns) / static_cast<double>(N); }
};

/// Returns `params` unchanged, or throws InvalidParam naming the first
/// violated constraint.
const SystemParams& validate(const SystemParams& params);

/// Total power budget met with equality: Ns * g^2 * (m^2 + sigma_v2) = P.
double amplifier_gain(const SystemParams& params);

}  // namespace dsdetect
