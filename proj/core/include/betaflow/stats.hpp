#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace betaflow::stats {

/// Kolmogorov-Smirnov verdict. pass holds exactly when statistic <= critical.
struct KsReport {
    std::string test;
    double statistic = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;  // 0 for one-sample
    double alpha = 0.0;
    double critical = 0.0;
    bool pass = false;

    /// JSON object with fields exactly
    /// {"test","statistic","critical","n","m","alpha","pass"}.
    std::string to_json() const;
};

/// Empirical characteristic function vs (1-it)^{-a}.
/// pass holds exactly when max_abs_gap <= 3*mc_error_bound + tolerance.
struct CfReport {
    std::vector<double> t_grid;
    double max_abs_gap = 0.0;
    double mc_error_bound = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Sample moments vs analytic moments, measured in Monte Carlo sigmas.
/// pass holds exactly when max_sigma_gap <= sigma_budget.
struct MomentReport {
    std::vector<double> sample_moments;  // k = 1..k_max
    std::vector<double> law_moments;
    std::vector<double> mc_sigmas;       // std error of each sample moment
    double max_sigma_gap = 0.0;
    double sigma_budget = 0.0;
    bool pass = false;
};

/// Asymptotic KS critical coefficient c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_coefficient(double alpha);

/// One-sample KS of sorted samples against a monotone CDF.
/// D = max_i max(i/n - F(x_i), F(x_i) - (i-1)/n); critical = c(alpha)/sqrt(n).
/// Throws std::invalid_argument on unsorted input.
KsReport ks_one_sample(std::span<const double> sorted_samples,
                       const std::function<double(double)>& cdf, double alpha,
                       std::string test_name = "ks1");

/// Two-sample KS between two sorted samples.
/// D = sup |F_a - F_b|; critical = c(alpha)*sqrt((n+m)/(n*m)).
/// Throws std::invalid_argument on unsorted input.
KsReport ks_two_sample(std::span<const double> sorted_a,
                       std::span<const double> sorted_b, double alpha,
                       std::string test_name = "ks2");

/// Raw moments E X^k, k = 1..k_max (k_max <= 8), of Beta(a,b):
/// E X^k = prod_{j=0}^{k-1} (a+j)/(a+b+j).
std::vector<double> beta_moments(double a, double b, std::size_t k_max);

/// Compares the empirical CF (1/n) sum e^{itX_j} with (1-it)^{-shape_a} on
/// t_grid; mc_error_bound = 2/sqrt(n).
CfReport empirical_cf_compare(std::span<const double> samples, double shape_a,
                              std::span<const double> t_grid,
                              double tolerance = 1e-9);

/// Compares sample moments k = 1..k_max against the Beta(a,b) moments,
/// each within sigma_budget Monte Carlo standard errors.
MomentReport compare_beta_moments(std::span<const double> samples, double a,
                                  double b, std::size_t k_max,
                                  double sigma_budget = 5.0);

/// Sorts a copy; KS entry points consume sorted views.
std::vector<double> sorted_copy(std::vector<double> samples);

}  // namespace betaflow::stats
