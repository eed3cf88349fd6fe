#include "dsdetect/exact.hpp"

#include <cmath>
#include <string>

#include "dsdetect/errors.hpp"

namespace dsdetect {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::Exact:
            return "exact";
        case Method::Asymptotic:
            return "asymptotic";
        case Method::MonteCarlo:
            return "montecarlo";
    }
    return "unknown";
}

ChannelModel ChannelModel::from_params(const SystemParams& params, SpreadingMatrix S) {
    validate(params);
    if (S.N() != params.N || S.Ns() != params.Ns) {
        throw DimensionMismatch("spreading matrix is " + std::to_string(S.N()) + " x " +
                                std::to_string(S.Ns()) + ", parameters require " +
                                std::to_string(params.N) + " x " + std::to_string(params.Ns));
    }
    const double g = amplifier_gain(params);
    return ChannelModel{std::move(S), g, params.m, params.sigma_v2, params.sigma_w2};
}

Eigen::MatrixXd channel_covariance(const ChannelModel& model) {
    const auto& S = model.S.entries();
    const Eigen::Index N = S.rows();
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(N, N) * model.sigma_w2;
    const double load = model.g * model.g * model.sigma_v2;
    if (load != 0.0) {
        sigma.selfadjointView<Eigen::Lower>().rankUpdate(S, load);
        sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();
    }
    return sigma;
}

FusionDetector::FusionDetector(const ChannelModel& model)
    : model_(model), llt_(channel_covariance(model)) {
    if (llt_.info() != Eigen::Success) {
        throw NumericalFailure("channel covariance is not positive definite");
    }
    const Eigen::VectorXd s1 = model_.S.entries().rowwise().sum();
    filter_ = llt_.solve(s1);
    quadratic_form_ = s1.dot(filter_);
    if (!std::isfinite(quadratic_form_) || quadratic_form_ < 0.0) {
        throw NumericalFailure("quadratic form is not a finite non-negative number");
    }
}

double FusionDetector::statistic(const Eigen::Ref<const Eigen::VectorXd>& r) const {
    if (r.size() != filter_.size()) {
        throw DimensionMismatch("received vector has length " + std::to_string(r.size()) +
                                ", expected " + std::to_string(filter_.size()));
    }
    return 2.0 * model_.g * model_.m * filter_.dot(r);
}

Eigen::MatrixXd FusionDetector::solve(const Eigen::Ref<const Eigen::MatrixXd>& b) const {
    if (b.rows() != filter_.size()) {
        throw DimensionMismatch("right-hand side has " + std::to_string(b.rows()) +
                                " rows, expected " + std::to_string(filter_.size()));
    }
    return llt_.solve(b);
}

double quadratic_form(const ChannelModel& model) {
    return FusionDetector(model).quadratic_form();
}

double fusion_statistic(const ChannelModel& model, const Eigen::Ref<const Eigen::VectorXd>& r) {
    return FusionDetector(model).statistic(r);
}

PerformanceReport exact_performance(const SystemParams& params, const SpreadingMatrix& S,
                                    const DetectorSpec& spec) {
    const FusionDetector detector(ChannelModel::from_params(params, S));
    const double g = detector.model().g;
    const double qf = detector.quadratic_form();

    PerformanceReport report;
    report.method = Method::Exact;
    report.tau_prime = resolve_threshold(spec, params, g, qf);
    const auto [pf, pm] = threshold_error_probabilities(report.tau_prime, g, params.m, qf);
    report.pf = pf;
    report.pm = pm;
    report.pe = params.p0 * pf + params.p1 * pm;
    return report;
}

}  // namespace dsdetect
