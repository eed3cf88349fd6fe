#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace dsdetect {

enum class Method { Exact, Asymptotic, MonteCarlo };

std::string_view to_string(Method m) noexcept;

struct MonteCarloStats {
    std::uint64_t trials_per_hypothesis = 0;
    std::uint64_t seed = 0;
    std::uint64_t false_alarms = 0;  // H0 trials with T >= tau'
    std::uint64_t misses = 0;        // H1 trials with T < tau'
    double se_pf = 0.0;
    double se_pm = 0.0;
    double se_pe = 0.0;
};

struct PerformanceReport {
    double pf = 0.0;
    double pm = 0.0;
    double pe = 0.0;
    Method method = Method::Exact;
    double tau_prime = 0.0;
    std::optional<MonteCarloStats> mc;
};

}  // namespace dsdetect
