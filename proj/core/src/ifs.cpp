#include "betaflow/ifs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "betaflow/dist.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/stats.hpp"

namespace betaflow::ifs {

namespace {

std::atomic<std::uint64_t> g_clamp_count{0};

constexpr double kClampGuard = 1e-14;

void check_pair_in_square(double a, double b) {
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
        throw std::domain_error("MuSampler emitted a pair outside [0,1]^2");
    }
}

}  // namespace

double StochMat2::row_gap() const {
    return std::max(std::fabs(e[0] - e[2]), std::fabs(e[1] - e[3]));
}

bool StochMat2::rows_stochastic(double tol) const {
    return std::fabs(e[0] + e[1] - 1.0) <= tol &&
           std::fabs(e[2] + e[3] - 1.0) <= tol;
}

std::string SchemeClass::str() const {
    std::string s = "<";
    s += static_cast<char>(first_stage);
    s += std::to_string(n_intervals);
    s += ',';
    s += static_cast<char>(stage1_rule);
    s += '_';
    s += static_cast<char>(stage1_mode);
    s += '|';
    s += static_cast<char>(stage2_rule);
    s += '_';
    s += static_cast<char>(stage2_mode);
    s += '>';
    return s;
}

double apply_f(double a, double b, double x) {
    const double y = a * x + b * (1.0 - x);
    if (y < 0.0) {
        if (y < -kClampGuard) {
            throw std::domain_error("apply_f: value escaped [0,1] beyond guard");
        }
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    if (y > 1.0) {
        if (y > 1.0 + kClampGuard) {
            throw std::domain_error("apply_f: value escaped [0,1] beyond guard");
        }
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return 1.0;
    }
    return y;
}

std::uint64_t clamp_count() {
    return g_clamp_count.load(std::memory_order_relaxed);
}

void reset_clamp_count() { g_clamp_count.store(0, std::memory_order_relaxed); }

double forward_run(const MuSampler& mu, double x0, std::size_t n,
                   rng::StreamKey& key) {
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = mu.sample(key);
        x = apply_f(a, b, x);
    }
    return x;
}

namespace {

// Clamps a raw endpoint into the enclosing interval. Excursions are
// rounding noise (single-rounded evaluations can stick out by an ulp);
// anything beyond the guard is a real bug.
double clamp_endpoint(double raw, double lo, double hi) {
    if (raw < lo) {
        if (lo - raw > kClampGuard) {
            throw std::domain_error(
                "backward_step: endpoint escaped the nested interval beyond "
                "the rounding guard");
        }
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return lo;
    }
    if (raw > hi) {
        if (raw - hi > kClampGuard) {
            throw std::domain_error(
                "backward_step: endpoint escaped the nested interval beyond "
                "the rounding guard");
        }
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return hi;
    }
    return raw;
}

}  // namespace

void backward_step(AffineState& state, double a, double b) {
    const double old_slope = state.slope;
    const double old_intercept = state.intercept;
    // Next interval = old map evaluated at the new factor's endpoints.
    const double end_a = std::fma(old_slope, a, old_intercept);
    const double end_b = std::fma(old_slope, b, old_intercept);
    state.lo_end = clamp_endpoint(std::min(end_a, end_b), state.lo_end,
                                  state.hi_end);
    state.hi_end = clamp_endpoint(std::max(end_a, end_b), state.lo_end,
                                  state.hi_end);
    state.slope = old_slope * (a - b);
    state.intercept = end_b;  // Y_{n+1}(0) = Y_n(b)
    ++state.steps;
}

AffineState compose_backward(const MuSampler& mu, std::size_t n,
                             rng::StreamKey& key) {
    AffineState state;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = mu.sample(key);
        backward_step(state, a, b);
    }
    return state;
}

BackwardResult backward_nest(const MuSampler& mu, rng::StreamKey& key,
                             double tol, std::size_t max_steps) {
    if (!mu.satisfies_c1) {
        throw std::invalid_argument(
            "backward_nest: sampler does not satisfy the contraction "
            "condition P(|A-B|=1) < 1");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("backward_nest: tol must be > 0");
    }
    // Absolute width alone cannot resolve limits that pile up against 0 or
    // 1 (a Beta(a,b) with a < 1 keeps percent-level mass below any absolute
    // tolerance), so convergence additionally requires the width to be
    // small relative to the midpoint's distance from the boundary.
    constexpr double kRelBoundaryTol = 1e-9;
    AffineState state;
    for (;;) {
        const double width = std::fabs(state.slope);
        if (width <= tol) {
            const double mid = state.intercept + state.slope / 2.0;
            const double boundary_dist = std::min(mid, 1.0 - mid);
            if (width <= kRelBoundaryTol * boundary_dist) break;
        }
        if (state.steps >= max_steps) {
            throw no_convergence_error(
                "backward_nest: max_steps reached with |slope| > tol");
        }
        const auto [a, b] = mu.sample(key);
        backward_step(state, a, b);
    }
    return BackwardResult{state.intercept + state.slope / 2.0, state};
}

double gamma_forward_run(const MuSampler& mu, double innovation_shape,
                         double x0, std::size_t n, rng::StreamKey& key) {
    if (!mu.satisfies_c2) {
        throw std::invalid_argument(
            "gamma_forward_run: sampler does not satisfy P(A=1) < 1");
    }
    if (!(innovation_shape > 0.0)) {
        throw std::invalid_argument(
            "gamma_forward_run: innovation_shape must be > 0");
    }
    if (!(x0 > 0.0)) {
        throw std::invalid_argument("gamma_forward_run: x0 must be > 0");
    }
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = mu.sample(key);
        x = a * x + b * dist::gamma_draw(innovation_shape, key);
    }
    return x;
}

StochMat2 factor(double a, double b) {
    check_pair_in_square(a, b);
    return StochMat2{{a, 1.0 - a, b, 1.0 - b}};
}

StochMat2 left_product_run(const MuSampler& mu, rng::StreamKey& key,
                           double tol, std::size_t max_steps) {
    if (!mu.satisfies_c1) {
        throw std::invalid_argument(
            "left_product_run: sampler does not satisfy the contraction "
            "condition P(|A-B|=1) < 1");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("left_product_run: tol must be > 0");
    }
    StochMat2 prod;  // identity
    for (std::size_t step = 0; step < max_steps; ++step) {
        const auto [a, b] = mu.sample(key);
        // prod <- factor(a,b) * prod; rows stay convex combinations.
        const StochMat2 f = factor(a, b);
        const StochMat2 old = prod;
        prod.e[0] = f.e[0] * old.e[0] + f.e[1] * old.e[2];
        prod.e[1] = f.e[0] * old.e[1] + f.e[1] * old.e[3];
        prod.e[2] = f.e[2] * old.e[0] + f.e[3] * old.e[2];
        prod.e[3] = f.e[2] * old.e[1] + f.e[3] * old.e[3];
        if (prod.row_gap() <= tol) return prod;
    }
    throw no_convergence_error(
        "left_product_run: max_steps reached before rows coalesced");
}

ConditionReport check_conditions(const MuSampler& mu, std::size_t n_probe,
                                 rng::StreamKey& key) {
    if (n_probe < 1) {
        throw std::invalid_argument("check_conditions: n_probe must be >= 1");
    }
    ConditionReport report;
    report.n_probe = n_probe;

    std::vector<double> as;
    std::vector<double> bs;
    as.reserve(n_probe);
    bs.reserve(n_probe);

    std::size_t n_unit_gap = 0;  // |A-B| == 1
    std::size_t n_a_one = 0;     // A == 1
    bool m1_violated = false;
    bool range_violated = false;

    for (std::size_t i = 0; i < n_probe; ++i) {
        const auto [a, b] = mu.sample(key);
        as.push_back(a);
        bs.push_back(b);
        if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
            range_violated = true;
        }
        if (mu.m1 && !(a > b)) m1_violated = true;
        if (std::fabs(a - b) == 1.0) ++n_unit_gap;
        if (a == 1.0) ++n_a_one;
    }

    if (range_violated) {
        report.violations.push_back("sample outside [0,1]^2");
    }
    if (m1_violated) {
        report.violations.push_back("m1 declared but a sample had A <= B");
    }
    if (mu.satisfies_c1 && n_unit_gap == n_probe) {
        report.violations.push_back(
            "satisfies_c1 declared but every probe had |A-B| = 1");
    }
    if (mu.satisfies_c2 && n_a_one == n_probe) {
        report.violations.push_back(
            "satisfies_c2 declared but every probe had A = 1");
    }

    // m2 / m3 are distributional statements; falsify through marginal
    // two-sample KS at a conservative level.
    if ((mu.m2 || mu.m3) && n_probe >= 100) {
        const double probe_alpha = 1e-6;
        std::vector<double> ref_a(as);
        std::vector<double> ref_b(bs);
        for (auto& v : ref_a) v = 1.0 - v;  // 1-A
        for (auto& v : ref_b) v = 1.0 - v;  // 1-B
        const auto sa = stats::sorted_copy(as);
        const auto sb = stats::sorted_copy(bs);
        const auto sra = stats::sorted_copy(std::move(ref_a));
        const auto srb = stats::sorted_copy(std::move(ref_b));
        if (mu.m2) {
            if (!stats::ks_two_sample(sra, sa, probe_alpha, "m2.A").pass ||
                !stats::ks_two_sample(srb, sb, probe_alpha, "m2.B").pass) {
                report.violations.push_back(
                    "m2 declared but reflected marginals mismatch");
            }
        }
        if (mu.m3) {
            if (!stats::ks_two_sample(sra, sb, probe_alpha, "m3.A").pass ||
                !stats::ks_two_sample(srb, sa, probe_alpha, "m3.B").pass) {
                report.violations.push_back(
                    "m3 declared but swapped-reflected marginals mismatch");
            }
        }
    }
    return report;
}

}  // namespace betaflow::ifs
