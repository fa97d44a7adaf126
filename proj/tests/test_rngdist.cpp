#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "betaflow/dist.hpp"
#include "betaflow/parallel.hpp"
#include "betaflow/quadrature.hpp"
#include "betaflow/rng.hpp"
#include "betaflow/specfun.hpp"
#include "betaflow/stats.hpp"

using namespace betaflow;
using dist::DistSpec;
using rng::StreamKey;

TEST_SUITE_BEGIN("rngdist");

TEST_CASE("streams are deterministic and distinct") {
    const StreamKey base{42, 0, 0};
    CHECK(rng::substream(base, 5) == rng::substream(base, 5));

    StreamKey a = rng::substream(base, 1);
    StreamKey b = rng::substream(base, 2);
    bool all_equal = true;
    for (int i = 0; i < 64; ++i) {
        if (rng::next_u64(a) != rng::next_u64(b)) all_equal = false;
    }
    CHECK_FALSE(all_equal);

    StreamKey c = rng::substream(base, 1);
    StreamKey d = rng::substream(base, 1);
    for (int i = 0; i < 64; ++i) {
        CHECK(rng::next_u64(c) == rng::next_u64(d));
    }
}

TEST_CASE("uniform ranges") {
    StreamKey key{7, 3, 0};
    for (int i = 0; i < 100000; ++i) {
        const double u = rng::next_u01(key);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 100000; ++i) {
        const double u = rng::next_u01_open(key);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("worker count never changes samples") {
    const StreamKey base{42, 9, 0};
    auto gen = [](StreamKey& key) {
        return dist::gamma_draw(1.3, key) + rng::next_u01(key);
    };
    const auto serial = parallel::collect_samples(5000, base, gen, 1);
    const auto threaded = parallel::collect_samples(5000, base, gen, 4);
    CHECK(serial == threaded);
}

TEST_CASE("degenerate draws") {
    StreamKey key{1, 0, 0};
    const auto one = DistSpec::bernoulli(1.0);
    const auto pm = DistSpec::point_mass(0.3);
    for (int i = 0; i < 100; ++i) {
        CHECK(dist::draw(one, key) == 1.0);
        CHECK(dist::draw(pm, key) == 0.3);
    }
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS((void)DistSpec::uniform(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)DistSpec::bernoulli(1.5), std::invalid_argument);
    CHECK_THROWS_AS((void)DistSpec::beta(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)DistSpec::gamma(-1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)DistSpec::point_mass(1.2), std::invalid_argument);
    CHECK_THROWS_AS((void)DistSpec::tent_power(0.0), std::invalid_argument);
}

TEST_CASE("Beta(1,1) draws are uniform (KS at alpha=0.01)") {
    StreamKey key{42, 17, 0};
    std::vector<double> xs(100000);
    const auto spec = DistSpec::beta(1.0, 1.0);
    for (auto& x : xs) x = dist::draw(spec, key);
    std::sort(xs.begin(), xs.end());
    const auto ks = stats::ks_one_sample(
        xs, [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.01);
    CHECK(ks.pass);
}

TEST_CASE("beta draws pass KS against reg_inc_beta") {
    const std::pair<double, double> shapes[] = {{0.5, 0.5}, {2.0, 2.0},
                                                {1.0, 3.0}};
    int stream = 23;
    for (const auto& [a, b] : shapes) {
        StreamKey key{42, static_cast<std::uint64_t>(stream++), 0};
        std::vector<double> xs(100000);
        for (auto& x : xs) x = dist::beta_draw(a, b, key);
        std::sort(xs.begin(), xs.end());
        const auto ks = stats::ks_one_sample(
            xs,
            [a, b](double x) {
                return specfun::reg_inc_beta(std::clamp(x, 0.0, 1.0), a, b);
            },
            0.001);
        CHECK_MESSAGE(ks.pass, "Beta(", a, ",", b, ") D=", ks.statistic);
    }
}

TEST_CASE("gamma draw means across shapes") {
    const std::size_t n = 1000000;
    int stream = 31;
    for (const double shape : {0.3, 1.0, 2.7, 10.0}) {
        StreamKey key{42, static_cast<std::uint64_t>(stream++), 0};
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += dist::gamma_draw(shape, key);
        }
        const double mean = sum / static_cast<double>(n);
        const double tol = 5.0 * std::sqrt(shape / static_cast<double>(n));
        CHECK_MESSAGE(std::fabs(mean - shape) <= tol, "shape=", shape,
                      " mean=", mean);
    }
}

TEST_CASE("tent-power quantile closed forms") {
    for (const double z : {0.5, 1.0, 3.0}) {
        CHECK(dist::tent_power_quantile(0.5, z) == doctest::Approx(0.5));
    }
    // z = 1 reduces to the uniform law.
    CHECK(dist::tent_power_quantile(0.25, 1.0) ==
          doctest::Approx(0.25).epsilon(1e-14));
    // Solve (1-(1-2s)^2)/2 = 0.1 by hand: s = (1-sqrt(0.8))/2.
    CHECK(dist::tent_power_quantile(0.1, 2.0) ==
          doctest::Approx(0.052786404500042060).epsilon(1e-14));
    CHECK(dist::tent_power_quantile(0.0, 2.0) == 0.0);
    CHECK(dist::tent_power_quantile(1.0, 2.0) == 1.0);
    CHECK_THROWS_AS((void)dist::tent_power_quantile(-0.1, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS((void)dist::tent_power_quantile(0.5, 0.0),
                    std::domain_error);
}

TEST_CASE("tent-power quantile inverts the CDF") {
    StreamKey key{55, 0, 0};
    for (int i = 0; i < 2000; ++i) {
        const double z = 0.2 + 4.0 * rng::next_u01(key);
        const double u = rng::next_u01_open(key);
        const auto spec = DistSpec::tent_power(z);
        const double s = dist::tent_power_quantile(u, z);
        CHECK(spec.cdf(s) == doctest::Approx(u).epsilon(1e-9));
    }
}

TEST_CASE("tent-power moments match quadrature of the density") {
    // The density has an integrable spike at 1/2 when z < 1; integrate the
    // two halves with a small analytic remainder around the midpoint.
    auto moment_by_quadrature = [](double z, int k) {
        auto f = [z, k](double u) {
            const double core = u < 0.5 ? std::pow(1.0 - 2.0 * u, z - 1.0)
                                        : std::pow(2.0 * u - 1.0, z - 1.0);
            return z * core * std::pow(u, k);
        };
        // Mass inside the excluded midpoint slice is (2*delta)^z, far below
        // the Monte Carlo resolution of this test.
        const double delta = 1e-9;
        return quadrature::adaptive_simpson(f, 0.0, 0.5 - delta, 1e-11) +
               quadrature::adaptive_simpson(f, 0.5 + delta, 1.0, 1e-11);
    };

    const std::size_t n = 200000;
    int stream = 61;
    for (const double z : {0.7, 1.0, 2.5}) {
        StreamKey key{42, static_cast<std::uint64_t>(stream++), 0};
        const auto spec = DistSpec::tent_power(z);
        double s1 = 0.0;
        double s2 = 0.0;
        double s4 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = dist::draw(spec, key);
            s1 += x;
            s2 += x * x;
            s4 += x * x * x * x;
        }
        const double nn = static_cast<double>(n);
        const double m1 = s1 / nn;
        const double m2 = s2 / nn;
        const double m4 = s4 / nn;
        const double sd1 = std::sqrt((m2 - m1 * m1) / nn);
        const double sd2 = std::sqrt((m4 - m2 * m2) / nn);
        CHECK(std::fabs(m1 - moment_by_quadrature(z, 1)) <= 4.0 * sd1 + 1e-7);
        CHECK(std::fabs(m2 - moment_by_quadrature(z, 2)) <= 4.0 * sd2 + 1e-7);
    }
}

TEST_SUITE_END();
