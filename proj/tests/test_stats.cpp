#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "betaflow/dist.hpp"
#include "betaflow/ifs.hpp"
#include "betaflow/models.hpp"
#include "betaflow/rng.hpp"
#include "betaflow/specfun.hpp"
#include "betaflow/stats.hpp"

using namespace betaflow;
using rng::StreamKey;

TEST_SUITE_BEGIN("stats");

namespace {
double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

TEST_CASE("one-sample KS hand examples") {
    // Single point at 0.5 against the uniform CDF: D = 0.5.
    const std::vector<double> one{0.5};
    const auto r = stats::ks_one_sample(one, uniform_cdf, 0.05);
    CHECK(r.statistic == doctest::Approx(0.5));
    CHECK(r.n == 1);
    CHECK(r.m == 0);

    // Samples at the (i-1/2)/n quantiles of the uniform law: D = 1/(2n).
    const std::size_t n = 400;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    }
    const auto r2 = stats::ks_one_sample(q, uniform_cdf, 0.05);
    CHECK(r2.statistic == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-12));
}

TEST_CASE("KS rejects unsorted input") {
    const std::vector<double> bad{0.5, 0.2, 0.7};
    CHECK_THROWS_AS((void)stats::ks_one_sample(bad, uniform_cdf, 0.05),
                    std::invalid_argument);
    const std::vector<double> ok{0.1, 0.2};
    CHECK_THROWS_AS((void)stats::ks_two_sample(ok, bad, 0.05),
                    std::invalid_argument);
}

TEST_CASE("two-sample KS basics") {
    const std::vector<double> a{0.1, 0.4, 0.9};
    CHECK(stats::ks_two_sample(a, a, 0.05).statistic == 0.0);

    // Calibration: same law passes at alpha=0.01.
    StreamKey k1{42, 111, 0};
    StreamKey k2{42, 112, 0};
    std::vector<double> g1(100000);
    std::vector<double> g2(100000);
    for (auto& v : g1) v = dist::gamma_draw(2.0, k1);
    for (auto& v : g2) v = dist::gamma_draw(2.0, k2);
    std::sort(g1.begin(), g1.end());
    std::sort(g2.begin(), g2.end());
    CHECK(stats::ks_two_sample(g1, g2, 0.01).pass);

    // Power: Gamma(2) vs Gamma(2.2) must be detected.
    StreamKey k3{42, 103, 0};
    std::vector<double> g3(30000);
    for (auto& v : g3) v = dist::gamma_draw(2.2, k3);
    std::sort(g3.begin(), g3.end());
    std::vector<double> g1s(g1.begin(), g1.begin() + 30000);
    CHECK_FALSE(stats::ks_two_sample(g1s, g3, 0.001).pass);
}

TEST_CASE("beta draws pass one-sample KS at alpha=0.01") {
    StreamKey key{42, 104, 0};
    std::vector<double> xs(100000);
    for (auto& x : xs) x = dist::beta_draw(2.0, 2.0, key);
    std::sort(xs.begin(), xs.end());
    const auto ks = stats::ks_one_sample(
        xs,
        [](double x) {
            return specfun::reg_inc_beta(std::clamp(x, 0.0, 1.0), 2.0, 2.0);
        },
        0.01);
    CHECK(ks.pass);
}

TEST_CASE("KS statistic is invariant under monotone transforms") {
    StreamKey key{42, 105, 0};
    std::vector<double> xs(5000);
    for (auto& x : xs) x = dist::beta_draw(2.0, 2.0, key);
    std::sort(xs.begin(), xs.end());
    const auto base = stats::ks_one_sample(
        xs,
        [](double x) { return specfun::reg_inc_beta(x, 2.0, 2.0); },
        0.001);

    // y = x^3 with the correspondingly transformed CDF.
    std::vector<double> ys(xs.size());
    std::transform(xs.begin(), xs.end(), ys.begin(),
                   [](double x) { return x * x * x; });
    const auto moved = stats::ks_one_sample(
        ys,
        [](double y) {
            return specfun::reg_inc_beta(std::cbrt(y), 2.0, 2.0);
        },
        0.001);
    CHECK(moved.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
}

TEST_CASE("beta_moments closed forms") {
    const auto m22 = stats::beta_moments(2.0, 2.0, 3);
    CHECK(m22[0] == doctest::Approx(0.5));
    CHECK(m22[1] == doctest::Approx(0.3));
    CHECK(m22[2] == doctest::Approx(0.2));

    const auto m11 = stats::beta_moments(1.0, 1.0, 8);
    for (std::size_t k = 1; k <= 8; ++k) {
        CHECK(m11[k - 1] == doctest::Approx(1.0 / (k + 1.0)));
    }

    CHECK(stats::beta_moments(3.0, 4.0, 1)[0] == doctest::Approx(3.0 / 7.0));
    CHECK_THROWS_AS((void)stats::beta_moments(1.0, 1.0, 9),
                    std::invalid_argument);
}

TEST_CASE("beta_moments reflection identity") {
    // E X^k under (a,b) equals E (1-X)^k under (b,a), expanded binomially.
    const double a = 2.3;
    const double b = 0.9;
    const std::size_t kmax = 6;
    const auto mab = stats::beta_moments(a, b, kmax);
    const auto mba = stats::beta_moments(b, a, kmax);
    for (std::size_t k = 1; k <= kmax; ++k) {
        double expect = 0.0;
        double binom = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
            const double mj = j == 0 ? 1.0 : mba[j - 1];
            expect += binom * (j % 2 == 0 ? mj : -mj);
            binom *= static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
        CHECK(std::fabs(mab[k - 1] - expect) <= 1e-14);
    }
}

TEST_CASE("forward-chain moments match the predicted beta moments") {
    const std::size_t n = 20000;
    for (const auto& [name, params] :
         std::vector<std::pair<std::string, std::map<std::string, double>>>{
             {"m2_dg", {{"w", 1.0}, {"y", 1.0}, {"z", 1.0}}},
             {"m1_t2", {{"z", 2.0}, {"p", 0.3}}}}) {
        const auto c = models::build_case(name, params);
        StreamKey key{42, 106, 0};
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) {
            StreamKey sub = rng::substream(rng::fork(key, i), 0);
            xs[i] = ifs::forward_run(c.mu, 0.5, 200, sub);
        }
        const auto report = stats::compare_beta_moments(
            xs, c.predicted_limit->p1, c.predicted_limit->p2, 4);
        CHECK_MESSAGE(report.pass, name,
                      " max sigma gap=", report.max_sigma_gap);
        CHECK(report.sample_moments.size() == 4);
        CHECK(report.law_moments.size() == 4);
    }

    // A shifted law is detected: Beta(2,2) draws against Beta(2,3) moments.
    StreamKey key{42, 109, 0};
    std::vector<double> ys(n);
    for (auto& y : ys) y = dist::beta_draw(2.0, 2.0, key);
    CHECK_FALSE(stats::compare_beta_moments(ys, 2.0, 3.0, 4).pass);
}

TEST_CASE("empirical CF comparison") {
    // Degenerate sample at 0: empirical CF is 1, far from (1-it)^{-a}.
    std::vector<double> zeros(10000, 0.0);
    const std::vector<double> grid{-1.0, -0.5, -0.1, 0.1, 0.5, 1.0};
    const auto bad = stats::empirical_cf_compare(zeros, 2.0, grid);
    CHECK_FALSE(bad.pass);

    // Gamma(2) draws match their CF.
    StreamKey key{42, 107, 0};
    std::vector<double> g(100000);
    for (auto& v : g) v = dist::gamma_draw(2.0, key);
    const auto good = stats::empirical_cf_compare(g, 2.0, grid);
    CHECK(good.pass);
    CHECK(good.mc_error_bound == doctest::Approx(2.0 / std::sqrt(100000.0)));

    // The gamma fixed point under a two-branch sampler: A V1 + B V2 has the
    // CF of V1 when (V1, V2) are unit exponentials and p = 1/2.
    const auto c = models::build_case("m1_t1", {{"p", 0.5}});
    std::vector<double> mix(100000);
    StreamKey key2{42, 108, 0};
    for (auto& v : mix) {
        const auto [av, bv] = c.mu.sample(key2);
        v = av * dist::gamma_draw(1.0, key2) + bv * dist::gamma_draw(1.0, key2);
    }
    CHECK(stats::empirical_cf_compare(mix, 1.0, grid).pass);
}

TEST_CASE("KsReport serializes with the exact field names") {
    stats::KsReport r;
    r.test = "demo";
    r.statistic = 0.25;
    r.n = 10;
    r.m = 0;
    r.alpha = 0.001;
    r.critical = 0.5;
    r.pass = true;
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j.size() == 7);
    CHECK(j.at("test") == "demo");
    CHECK(j.at("statistic") == 0.25);
    CHECK(j.at("critical") == 0.5);
    CHECK(j.at("n") == 10);
    CHECK(j.at("m") == 0);
    CHECK(j.at("alpha") == 0.001);
    CHECK(j.at("pass") == true);
}

TEST_CASE("critical coefficient") {
    CHECK(stats::ks_critical_coefficient(0.001) ==
          doctest::Approx(std::sqrt(-std::log(0.0005) / 2.0)));
    CHECK_THROWS_AS((void)stats::ks_critical_coefficient(0.0),
                    std::invalid_argument);
}

TEST_SUITE_END();
