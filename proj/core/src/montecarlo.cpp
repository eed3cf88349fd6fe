#include "dsdetect/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "dsdetect/errors.hpp"
#include "dsdetect/parallel.hpp"

namespace dsdetect {

namespace {

constexpr std::uint64_t kTrialStream = 0x4D43545249414C01ULL;
constexpr std::uint64_t kBlockTrials = 4096;

double signal_sign(Hypothesis h) { return h == Hypothesis::H1 ? 1.0 : -1.0; }

}  // namespace

rng::Xoshiro256ss trial_stream(std::uint64_t seed, Hypothesis h, std::uint64_t trial) noexcept {
    return rng::Xoshiro256ss(
        rng::derive_key(seed, {kTrialStream, static_cast<std::uint64_t>(h), trial}));
}

Eigen::VectorXd simulate_trial(const ChannelModel& model, Hypothesis h,
                               rng::Xoshiro256ss& trial_rng) {
    const auto& S = model.S.entries();
    rng::GaussianSampler normal;
    const double mean = signal_sign(h) * model.m;
    const double sigma_v = std::sqrt(model.sigma_v2);
    const double sigma_w = std::sqrt(model.sigma_w2);

    Eigen::VectorXd z(S.cols());
    for (Eigen::Index n = 0; n < z.size(); ++n) z[n] = mean + sigma_v * normal(trial_rng);
    Eigen::VectorXd r = model.g * (S * z);
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] += sigma_w * normal(trial_rng);
    return r;
}

PerformanceReport estimate(const SystemParams& params, const SpreadingMatrix& S,
                           const DetectorSpec& spec, const McConfig& mc) {
    if (mc.trials_per_hypothesis < 1) {
        throw InvalidParam("trials", 0.0, "trials_per_hypothesis >= 1");
    }
    const FusionDetector detector(ChannelModel::from_params(params, S));
    const ChannelModel& model = detector.model();
    const double tau = resolve_threshold(spec, params, model.g, detector.quadratic_form());

    // T(r) = 2 g m f^T (g S z + sigma_w w) with f = Sigma^{-1} S 1, folded
    // into per-deviate weights so a trial costs O(N + Ns) instead of O(N Ns).
    const double scale = 2.0 * model.g * model.m;
    const Eigen::VectorXd sensor_weight =
        scale * model.g * (S.entries().transpose() * detector.filter());
    const Eigen::VectorXd chip_weight = scale * std::sqrt(model.sigma_w2) * detector.filter();
    const double sigma_v = std::sqrt(model.sigma_v2);
    const double sensor_weight_sum = sensor_weight.sum();

    const std::uint64_t trials = mc.trials_per_hypothesis;
    const std::uint64_t blocks_per_h = (trials + kBlockTrials - 1) / kBlockTrials;
    std::atomic<std::uint64_t> errors[2] = {0, 0};

    parallel_for(2 * blocks_per_h, mc.workers, [&](std::size_t job) {
        const auto h = job < blocks_per_h ? Hypothesis::H0 : Hypothesis::H1;
        const std::uint64_t block = job % blocks_per_h;
        const std::uint64_t first = block * kBlockTrials;
        const std::uint64_t last = std::min(trials, first + kBlockTrials);
        const double mean_part = signal_sign(h) * model.m * sensor_weight_sum;

        std::uint64_t count = 0;
        for (std::uint64_t t = first; t < last; ++t) {
            auto gen = trial_stream(mc.seed, h, t);
            rng::GaussianSampler normal;
            double stat = mean_part;
            for (Eigen::Index n = 0; n < sensor_weight.size(); ++n) {
                stat += sensor_weight[n] * sigma_v * normal(gen);
            }
            for (Eigen::Index i = 0; i < chip_weight.size(); ++i) {
                stat += chip_weight[i] * normal(gen);
            }
            const bool decide_h1 = stat >= tau;
            if (h == Hypothesis::H0 ? decide_h1 : !decide_h1) ++count;
        }
        errors[static_cast<std::size_t>(h)].fetch_add(count, std::memory_order_relaxed);
    });

    const double n = static_cast<double>(trials);
    MonteCarloStats stats;
    stats.trials_per_hypothesis = trials;
    stats.seed = mc.seed;
    stats.false_alarms = errors[0].load();
    stats.misses = errors[1].load();

    PerformanceReport report;
    report.method = Method::MonteCarlo;
    report.tau_prime = tau;
    report.pf = static_cast<double>(stats.false_alarms) / n;
    report.pm = static_cast<double>(stats.misses) / n;
    report.pe = params.p0 * report.pf + params.p1 * report.pm;
    stats.se_pf = std::sqrt(report.pf * (1.0 - report.pf) / n);
    stats.se_pm = std::sqrt(report.pm * (1.0 - report.pm) / n);
    stats.se_pe = std::sqrt(params.p0 * params.p0 * stats.se_pf * stats.se_pf +
                            params.p1 * params.p1 * stats.se_pm * stats.se_pm);
    report.mc = stats;
    return report;
}

}  // namespace dsdetect
