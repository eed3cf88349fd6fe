#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsdetect/asymptotics.hpp"
#include "dsdetect/errors.hpp"
#include "dsdetect/exact.hpp"
#include "dsdetect/gaussian.hpp"

using namespace dsdetect;

namespace {

SystemParams params(std::int64_t N, std::int64_t Ns, double P = 10.0, double sv = 1.0,
                    double sw = 1.0, double m = 1.0) {
    SystemParams p;
    p.N = N;
    p.Ns = Ns;
    p.P = P;
    p.m = m;
    p.sigma_v2 = sv;
    p.sigma_w2 = sw;
    return p;
}

double residual(double alpha, double gamma, double sw, double b) {
    return gamma * sw * b * b + (alpha * (gamma + sw) - gamma) * b - alpha;
}

}  // namespace

TEST_CASE("gamma") {
    CHECK(gamma(params(10, 10)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gamma(params(10, 10, 10.0, 1e9)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(gamma(params(10, 10, 10.0, 0.0)), DomainError);

    for (auto [N, Ns] : {std::pair{4, 2}, {10, 10}, {7, 40}, {1000, 3}}) {
        for (double sv : {0.1, 1.0, 5.0}) {
            const auto p = params(N, Ns, 3.0, sv, 1.0, 0.6);
            const double g = amplifier_gain(p);
            CHECK(std::abs(gamma(p) * N / Ns - g * g * sv) <= 1e-12);
        }
    }
}

TEST_CASE("beta0 closed values") {
    CHECK(beta0(0.0, 0.7, 2.0) == 0.5);
    CHECK(beta0(0.0, 1.3, 0.3) == 1.0 / 0.3);
    CHECK(std::abs(beta0(1.0, 1.0, 1.0) - 0.618033988749894848) <= 1e-12);
    CHECK(std::abs(beta0(1.0, 0.5, 1.0) - 0.732050807568877294) <= 1e-12);
}

TEST_CASE("beta0 rejects invalid arguments") {
    CHECK_THROWS_AS(beta0(1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(beta0(1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(beta0(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(beta0(-0.1, 1.0, 1.0), DomainError);
}

TEST_CASE("beta0 is the positive root, bounded and decreasing in alpha") {
    const std::vector<double> alphas{0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 1e4};
    for (double gamma : {1e-6, 0.01, 0.5, 1.0, 3.0, 50.0}) {
        for (double sw : {0.01, 0.5, 1.0, 10.0}) {
            double last = std::numeric_limits<double>::infinity();
            for (double a : alphas) {
                const double b = beta0(a, gamma, sw);
                INFO("alpha = " << a << ", gamma = " << gamma << ", sw = " << sw);
                CHECK(b > 0.0);
                CHECK(b <= 1.0 / sw * (1.0 + 1e-15));
                CHECK(std::abs(residual(a, gamma, sw, b)) <= 1e-9 * std::max(1.0, a));
                if (gamma >= 0.01) {
                    CHECK(b < last);
                } else {
                    CHECK(b <= last);
                }
                last = b;
            }
            // Fixed-gamma large-alpha limit.
            CHECK(beta0(1e9, gamma, sw) ==
                  doctest::Approx(beta0_large_alpha_limit(gamma, sw)).epsilon(1e-6));
        }
    }
}

TEST_CASE("beta0 matches the textbook quadratic formula where it is well conditioned") {
    for (double a : {0.25, 1.0, 4.0}) {
        for (double gamma : {0.3, 2.0}) {
            const double sw = 0.8;
            const double textbook =
                (std::sqrt((gamma + sw) * (gamma + sw) * a * a + 2.0 * gamma * (sw - gamma) * a +
                           gamma * gamma) -
                 (gamma + sw) * a + gamma) /
                (2.0 * gamma * sw);
            CHECK(beta0(a, gamma, sw) == doctest::Approx(textbook).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero-noise limit path") {
    CHECK(beta0_zero_gamma_limit(0.25) == 4.0);
    CHECK(beta0(3.0, 1e-12, 0.25) == doctest::Approx(4.0).epsilon(1e-9));

    const auto p = params(16, 32, 10.0, 0.0, 1.0, 1.0);
    const auto a = asymptotic_params(p);
    CHECK(a.gamma == 0.0);
    CHECK(a.beta0 == 1.0);
    CHECK(a.mu == doctest::Approx(1.0 / 10.0));
}

TEST_CASE("mu chained example") {
    const auto p = params(10, 10);
    const auto a = asymptotic_params(p);
    CHECK(a.alpha == 1.0);
    CHECK(a.gamma == doctest::Approx(0.5));
    CHECK(a.beta0 == doctest::Approx(0.732050807568877294).epsilon(1e-12));
    CHECK(a.mu == doctest::Approx(0.373205080756887729).epsilon(1e-12));
    CHECK(mu(p, a.beta0) == a.mu);
    CHECK_THROWS_AS(mu(p, 0.0), DomainError);
}

TEST_CASE("asymptotic_performance") {
    const auto p = params(10, 10);
    const auto r = asymptotic_performance(p, DetectorSpec::bayes());
    CHECK(r.method == Method::Asymptotic);
    CHECK(r.pf == r.pm);
    CHECK(r.pe == doctest::Approx(0.0508240771123902863).epsilon(1e-10));
    CHECK(r.pe == doctest::Approx(q_function(1.0 / std::sqrt(0.373205080756887729))).epsilon(1e-10));
}

TEST_CASE("asymptotic formulas equal the exact ones at g^2 Q_f = 1/mu") {
    for (double tau : {-3.0, -0.5, 0.0, 0.7, 2.5}) {
        for (double m : {0.5, 1.0, 2.0}) {
            for (auto [N, Ns] : {std::pair{8, 4}, {10, 10}, {64, 256}}) {
                auto p = params(N, Ns, 5.0, 0.7, 1.2, m);
                const double mu_v = asymptotic_params(p).mu;
                const auto r = asymptotic_performance(p, DetectorSpec::fixed(tau));
                // As written in closed form.
                const double pf = q_function(std::sqrt(mu_v) * (tau + 2 * m * m / mu_v) / (2 * m));
                const double pm = q_function(std::sqrt(mu_v) * (2 * m * m / mu_v - tau) / (2 * m));
                CHECK(r.pf == doctest::Approx(pf).epsilon(1e-12));
                CHECK(r.pm == doctest::Approx(pm).epsilon(1e-12));
                // Same thing through an arbitrary (g, qf) split.
                const double g = 0.37;
                const auto split = threshold_error_probabilities(tau, g, m, 1.0 / (mu_v * g * g));
                CHECK(split.pf == doctest::Approx(pf).epsilon(1e-12));
                CHECK(split.pm == doctest::Approx(pm).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("large_alpha_pe") {
    CHECK(large_alpha_pe(params(10, 10)) == doctest::Approx(0.0126736593387341320).epsilon(1e-10));
    const auto perfect = params(10, 10, 7.0, 0.0, 2.0);
    CHECK(large_alpha_pe(perfect) == doctest::Approx(q_function(std::sqrt(3.5))).epsilon(1e-14));

    // Joint limit alpha = 1e4, N = 1e6 (gamma ~ 5e-6).
    const auto joint = params(1000000, 10000000000LL);
    const auto r = asymptotic_performance(joint, DetectorSpec::bayes());
    CHECK(std::abs(r.pe - large_alpha_pe(joint)) <= 1e-3);
}

TEST_CASE("single_sensor_pe") {
    const auto p = params(1, 1, 2.0);
    CHECK(single_sensor_pe(p) == doctest::Approx(0.239750061093476731).epsilon(1e-12));
    // Equals the exact scalar channel for either sign of the code.
    for (double sign : {1.0, -1.0}) {
        Eigen::MatrixXd s(1, 1);
        s << sign;
        for (double P : {0.5, 2.0, 30.0}) {
            for (double sv : {0.2, 1.0, 3.0}) {
                const auto q = params(1, 1, P, sv, 0.6, 1.1);
                const auto exact = exact_performance(q, SpreadingMatrix::load(s), DetectorSpec::fixed(0.0));
                CHECK(std::abs(exact.pe - single_sensor_pe(q)) <= 1e-12);
            }
        }
    }
    // Observation-noise floor as P grows.
    CHECK(single_sensor_pe(params(1, 1, 1e12, 0.25)) ==
          doctest::Approx(q_function(1.0 / 0.5)).epsilon(1e-6));
    // The written form and the simplified form agree.
    const auto q = params(3, 3, 4.0, 0.5, 2.0, 1.5);
    const double snr = q.P / q.sigma_w2;
    const double written = q_function(std::sqrt(
        snr / (snr / (q.m * q.m / q.sigma_v2) + (1.0 + q.sigma_v2 / (q.m * q.m)))));
    CHECK(single_sensor_pe(q) == doctest::Approx(written).epsilon(1e-14));
}

TEST_CASE("more sensors beat one sensor whenever sigma_v2 > 0") {
    for (double P : {0.1, 1.0, 10.0, 100.0}) {
        for (double sv : {0.01, 0.5, 1.0, 4.0}) {
            for (double sw : {0.1, 1.0, 3.0}) {
                const auto p = params(16, 16, P, sv, sw, 1.0);
                CHECK(large_alpha_pe(p) < single_sensor_pe(p));
            }
        }
    }
}

TEST_CASE("asymptotic P_e is non-increasing in alpha at fixed N") {
    for (std::int64_t N : {8, 16, 32, 64, 128, 1024}) {
        double last = 1.0;
        for (double a : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 64.0}) {
            const auto p = params(N, std::llround(a * N));
            const double pe = asymptotic_performance(p, DetectorSpec::bayes()).pe;
            CHECK(pe <= last);
            last = pe;
        }
    }
}
