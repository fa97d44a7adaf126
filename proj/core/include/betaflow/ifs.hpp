#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "betaflow/rng.hpp"

namespace betaflow::ifs {

/// Sampler of (A,B) pairs on [0,1]^2 driving the linear family
/// f_{A,B}(x) = Ax + B(1-x), plus declared structural conditions:
///   m1            A > B almost surely
///   m2            (A,B) and (1-A,1-B) share the same law
///   m3            (1-A,1-B) and (B,A) share the same law
///   satisfies_c1  P(|A-B| = 1) < 1  (contraction; backward limit exists)
///   satisfies_c2  P(A = 1) < 1      (gamma-side chain converges)
struct MuSampler {
    std::function<std::pair<double, double>(rng::StreamKey&)> sample;
    bool m1 = false;
    bool m2 = false;
    bool m3 = false;
    bool satisfies_c1 = false;
    bool satisfies_c2 = false;
};

/// Composed backward map Y_n(x) = slope*x + intercept. The image of [0,1]
/// is the n-th nested interval; |slope| never grows under composition.
///
/// The interval endpoints are carried explicitly: each step evaluates the
/// old map at the new factor's endpoints with a single rounding (fma) and
/// clamps the results into the previous interval under the 1e-14 drift
/// guard, so the reported intervals nest exactly. Raw double re-assembly of
/// slope + intercept can stick out of the previous interval by an ulp.
struct AffineState {
    double slope = 1.0;
    double intercept = 0.0;
    std::size_t steps = 0;
    double lo_end = 0.0;
    double hi_end = 1.0;

    double operator()(double x) const { return slope * x + intercept; }
    double lo() const { return lo_end; }
    double hi() const { return hi_end; }
};

/// 2x2 row-stochastic matrix, row-major.
struct StochMat2 {
    double e[4] = {1.0, 0.0, 0.0, 1.0};

    double row_gap() const;                       // sup-norm row difference
    bool rows_stochastic(double tol) const;       // each row sums to 1
};

/// Scheme taxonomy <L_N, L'_M' | L''_M''>: splitting vs general first stage,
/// interval count, deterministic vs random rule, i.i.d. vs general mode.
enum class StageShape : char { split = 'S', general = 'G' };
enum class Rule : char { deterministic = 'D', random = 'R' };
enum class Mode : char { iid = 'I', general = 'G' };

struct SchemeClass {
    StageShape first_stage = StageShape::general;
    int n_intervals = 1;
    Rule stage1_rule = Rule::random;
    Mode stage1_mode = Mode::iid;
    Rule stage2_rule = Rule::random;
    Mode stage2_mode = Mode::iid;

    std::string str() const;  // e.g. "<S2,R_I|R_I>"
};

/// f_{a,b}(x) = ax + b(1-x), clamped into [0,1] against rounding drift.
/// Excursions beyond 1e-14 outside the unit interval are a hard error;
/// smaller ones are clamped and counted (see clamp_count).
double apply_f(double a, double b, double x);

/// Number of rounding clamps applied by apply_f since the last reset.
std::uint64_t clamp_count();
void reset_clamp_count();

/// X_n = (A_n - B_n) X_{n-1} + B_n after n i.i.d. steps from x0.
double forward_run(const MuSampler& mu, double x0, std::size_t n,
                   rng::StreamKey& key);

/// Exactly n backward compositions Y_n = Y_{n-1} o F_n:
/// slope *= (A - B), intercept += old_slope * B.
AffineState compose_backward(const MuSampler& mu, std::size_t n,
                             rng::StreamKey& key);

/// One composition step in place.
void backward_step(AffineState& state, double a, double b);

struct BackwardResult {
    double limit = 0.0;
    AffineState state;
};

/// Iterates backward compositions until the nested interval has width
/// <= tol AND the width is small relative to the midpoint's distance from
/// {0,1} (limits piling up on a boundary need relative resolution there).
/// The limit is read out as the interval midpoint, so its error is at most
/// tol/2. Requires mu.satisfies_c1; throws betaflow::no_convergence_error
/// past max_steps.
BackwardResult backward_nest(const MuSampler& mu, rng::StreamKey& key,
                             double tol = 1e-12,
                             std::size_t max_steps = 100000);

/// Gamma-side chain X'_n = A_n X'_{n-1} + B_n V_n with V_n ~
/// Gamma(innovation_shape). Requires mu.satisfies_c2 and x0 > 0.
double gamma_forward_run(const MuSampler& mu, double innovation_shape,
                         double x0, std::size_t n, rng::StreamKey& key);

/// Row-stochastic factor with rows (a, 1-a) and (b, 1-b).
StochMat2 factor(double a, double b);

/// Left-multiplies fresh factors until the two rows agree within tol in sup
/// norm (rank-one limit with rows (Y, 1-Y)). Requires mu.satisfies_c1;
/// throws betaflow::no_convergence_error past max_steps.
StochMat2 left_product_run(const MuSampler& mu, rng::StreamKey& key,
                           double tol, std::size_t max_steps = 100000);

/// Report-only empirical falsification of a sampler's declared flags.
struct ConditionReport {
    std::size_t n_probe = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Probes n_probe samples: range violations, an A <= B sample under a
/// declared m1, all-|A-B|=1 under satisfies_c1, all-A=1 under satisfies_c2,
/// and marginal KS falsification of declared m2/m3.
ConditionReport check_conditions(const MuSampler& mu, std::size_t n_probe,
                                 rng::StreamKey& key);

}  // namespace betaflow::ifs
