#include "betaflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <json.hpp>

namespace betaflow::stats {

namespace {

void require_sorted(std::span<const double> xs, const char* who) {
    if (!std::is_sorted(xs.begin(), xs.end())) {
        throw std::invalid_argument(std::string(who) +
                                    ": samples must be sorted ascending");
    }
}

}  // namespace

std::string KsReport::to_json() const {
    nlohmann::json j;
    j["test"] = test;
    j["statistic"] = statistic;
    j["critical"] = critical;
    j["n"] = n;
    j["m"] = m;
    j["alpha"] = alpha;
    j["pass"] = pass;
    return j.dump();
}

double ks_critical_coefficient(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("ks: alpha must be in (0,1)");
    }
    return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

KsReport ks_one_sample(std::span<const double> sorted_samples,
                       const std::function<double(double)>& cdf, double alpha,
                       std::string test_name) {
    require_sorted(sorted_samples, "ks_one_sample");
    const std::size_t n = sorted_samples.size();
    if (n == 0) throw std::invalid_argument("ks_one_sample: empty sample");

    double d = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sorted_samples[i]);
        const double hi = static_cast<double>(i + 1) * inv_n - f;
        const double lo = f - static_cast<double>(i) * inv_n;
        d = std::max({d, hi, lo});
    }

    KsReport r;
    r.test = std::move(test_name);
    r.statistic = d;
    r.n = n;
    r.m = 0;
    r.alpha = alpha;
    r.critical =
        ks_critical_coefficient(alpha) / std::sqrt(static_cast<double>(n));
    r.pass = r.statistic <= r.critical;
    return r;
}

KsReport ks_two_sample(std::span<const double> sorted_a,
                       std::span<const double> sorted_b, double alpha,
                       std::string test_name) {
    require_sorted(sorted_a, "ks_two_sample");
    require_sorted(sorted_b, "ks_two_sample");
    const std::size_t n = sorted_a.size();
    const std::size_t m = sorted_b.size();
    if (n == 0 || m == 0) {
        throw std::invalid_argument("ks_two_sample: empty sample");
    }

    // Merge walk over both ECDFs.
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_m = 1.0 / static_cast<double>(m);
    while (i < n && j < m) {
        const double x = std::min(sorted_a[i], sorted_b[j]);
        while (i < n && sorted_a[i] <= x) ++i;
        while (j < m && sorted_b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) * inv_n -
                                  static_cast<double>(j) * inv_m));
    }

    KsReport r;
    r.test = std::move(test_name);
    r.statistic = d;
    r.n = n;
    r.m = m;
    r.alpha = alpha;
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    r.critical = ks_critical_coefficient(alpha) * std::sqrt((nn + mm) / (nn * mm));
    r.pass = r.statistic <= r.critical;
    return r;
}

std::vector<double> beta_moments(double a, double b, std::size_t k_max) {
    if (!(a > 0.0 && b > 0.0)) {
        throw std::invalid_argument("beta_moments: requires a, b > 0");
    }
    if (k_max > 8) {
        throw std::invalid_argument("beta_moments: k_max must be <= 8");
    }
    std::vector<double> moments;
    moments.reserve(k_max);
    double mk = 1.0;
    for (std::size_t k = 0; k < k_max; ++k) {
        const double j = static_cast<double>(k);
        mk *= (a + j) / (a + b + j);
        moments.push_back(mk);
    }
    return moments;
}

CfReport empirical_cf_compare(std::span<const double> samples, double shape_a,
                              std::span<const double> t_grid,
                              double tolerance) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical_cf_compare: empty sample");
    }
    CfReport r;
    r.t_grid.assign(t_grid.begin(), t_grid.end());
    r.tolerance = tolerance;
    r.mc_error_bound = 2.0 / std::sqrt(static_cast<double>(samples.size()));

    for (const double t : t_grid) {
        double re = 0.0;
        double im = 0.0;
        for (const double x : samples) {
            re += std::cos(t * x);
            im += std::sin(t * x);
        }
        const double inv_n = 1.0 / static_cast<double>(samples.size());
        const std::complex<double> empirical{re * inv_n, im * inv_n};
        const std::complex<double> target =
            std::pow(std::complex<double>{1.0, -t}, -shape_a);
        r.max_abs_gap = std::max(r.max_abs_gap, std::abs(empirical - target));
    }
    r.pass = r.max_abs_gap <= 3.0 * r.mc_error_bound + r.tolerance;
    return r;
}

MomentReport compare_beta_moments(std::span<const double> samples, double a,
                                  double b, std::size_t k_max,
                                  double sigma_budget) {
    if (samples.empty()) {
        throw std::invalid_argument("compare_beta_moments: empty sample");
    }
    MomentReport r;
    r.sigma_budget = sigma_budget;
    r.law_moments = beta_moments(a, b, k_max);
    const double n = static_cast<double>(samples.size());
    for (std::size_t k = 1; k <= k_max; ++k) {
        double s = 0.0;
        double s2 = 0.0;
        for (const double x : samples) {
            const double xk = std::pow(x, static_cast<double>(k));
            s += xk;
            s2 += xk * xk;
        }
        const double mean = s / n;
        const double sigma = std::sqrt(std::max(0.0, s2 / n - mean * mean) / n);
        r.sample_moments.push_back(mean);
        r.mc_sigmas.push_back(sigma);
        const double gap = std::fabs(mean - r.law_moments[k - 1]);
        r.max_sigma_gap =
            std::max(r.max_sigma_gap, sigma > 0.0 ? gap / sigma : 0.0);
    }
    r.pass = r.max_sigma_gap <= r.sigma_budget;
    return r;
}

std::vector<double> sorted_copy(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    return samples;
}

}  // namespace betaflow::stats
