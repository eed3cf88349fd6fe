#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "dsdetect/detector.hpp"
#include "dsdetect/params.hpp"
#include "dsdetect/report.hpp"
#include "dsdetect/spreading.hpp"

namespace dsdetect {

/// Received-signal model at the fusion center for the deterministic-signal
/// case: r = g S z + w, z = +/- m 1 + v, v ~ N(0, sigma_v2 I), w ~ N(0, sigma_w2 I).
struct ChannelModel {
    SpreadingMatrix S;
    double g;
    double m;
    double sigma_v2;
    double sigma_w2;

    /// Builds the model with g = amplifier_gain(params). Throws
    /// DimensionMismatch when S is not params.N x params.Ns.
    static ChannelModel from_params(const SystemParams& params, SpreadingMatrix S);
};

/// Sigma = g^2 sigma_v2 S S^T + sigma_w2 I.
Eigen::MatrixXd channel_covariance(const ChannelModel& model);

/// Cholesky factor of Sigma together with the whitened matched filter
/// Sigma^{-1} S 1. Everything downstream (quadratic form, fusion statistic,
/// error probabilities) reuses these.
class FusionDetector {
public:
    /// Throws NumericalFailure if Sigma does not factor.
    explicit FusionDetector(const ChannelModel& model);

    const ChannelModel& model() const noexcept { return model_; }

    /// 1^T S^T Sigma^{-1} S 1.
    double quadratic_form() const noexcept { return quadratic_form_; }

    /// Sigma^{-1} S 1.
    const Eigen::VectorXd& filter() const noexcept { return filter_; }

    /// T(r) = 2 g m 1^T S^T Sigma^{-1} r. Throws DimensionMismatch.
    double statistic(const Eigen::Ref<const Eigen::VectorXd>& r) const;

    /// Sigma^{-1} b via the stored factor.
    Eigen::MatrixXd solve(const Eigen::Ref<const Eigen::MatrixXd>& b) const;

private:
    ChannelModel model_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd filter_;
    double quadratic_form_;
};

double quadratic_form(const ChannelModel& model);

double fusion_statistic(const ChannelModel& model, const Eigen::Ref<const Eigen::VectorXd>& r);

/// Closed-form P_f, P_m, P_e of the threshold test for the given codes.
PerformanceReport exact_performance(const SystemParams& params, const SpreadingMatrix& S,
                                    const DetectorSpec& spec);

}  // namespace dsdetect
