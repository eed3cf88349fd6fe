#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "dsdetect/detector.hpp"
#include "dsdetect/exact.hpp"
#include "dsdetect/params.hpp"
#include "dsdetect/report.hpp"
#include "dsdetect/rng.hpp"
#include "dsdetect/spreading.hpp"

namespace dsdetect {

enum class Hypothesis : std::uint64_t { H0 = 0, H1 = 1 };

struct McConfig {
    std::uint64_t trials_per_hypothesis = 100000;
    std::uint64_t seed = 1;
    /// Degree of parallelism; 0 = hardware concurrency. Never affects results.
    unsigned workers = 0;
};

/// Independent stream for one trial, keyed by (seed, hypothesis, trial).
rng::Xoshiro256ss trial_stream(std::uint64_t seed, Hypothesis h, std::uint64_t trial) noexcept;

/// One draw of the generative model. Consumes Ns deviates for the sensor
/// noise v, then N deviates for the receiver noise w, from `trial_rng`:
/// z = -/+ m 1 + sigma_v v, r = g S z + sigma_w w.
Eigen::VectorXd simulate_trial(const ChannelModel& model, Hypothesis h,
                               rng::Xoshiro256ss& trial_rng);

/// Empirical P_f and P_m over separate H0 / H1 trial pools, P_e recombined
/// with the priors. Ties T == tau' decide H1. The result is a pure function
/// of the inputs and mc.seed; mc.workers only changes wall time.
PerformanceReport estimate(const SystemParams& params, const SpreadingMatrix& S,
                           const DetectorSpec& spec, const McConfig& mc);

}  // namespace dsdetect
