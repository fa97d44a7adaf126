#include "betaflow/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace betaflow::models {

namespace {

using dist::DistSpec;
using ifs::Mode;
using ifs::MuSampler;
using ifs::Rule;
using ifs::SchemeClass;
using ifs::StageShape;
using rng::StreamKey;

[[noreturn]] void param_error(const std::string& model,
                              const std::string& what) {
    throw std::invalid_argument(model + ": " + what);
}

void require(bool ok, const std::string& model, const std::string& what) {
    if (!ok) param_error(model, what);
}

double fetch(const std::string& model,
             const std::map<std::string, double>& params,
             const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) param_error(model, "missing parameter '" + key + "'");
    return it->second;
}

void check_keys(const std::string& model,
                const std::map<std::string, double>& params,
                std::initializer_list<const char*> expected) {
    for (const auto& kv : params) {
        bool known = false;
        for (const char* e : expected) {
            if (kv.first == e) known = true;
        }
        if (!known) param_error(model, "unknown parameter '" + kv.first + "'");
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

SchemeClass scheme(StageShape shape, int n, Rule r1, Mode m1, Rule r2,
                   Mode m2) {
    return SchemeClass{shape, n, r1, m1, r2, m2};
}

std::set<Claim> claims_for(bool has_limit, bool c2) {
    if (!has_limit) return {};
    std::set<Claim> cs{Claim::a1_gamma, Claim::a1_beta, Claim::a2_backward,
                       Claim::a3_forward};
    if (c2) cs.insert(Claim::a4_gamma);
    return cs;
}

void finish(ModelCase& c) {
    if (c.predicted_limit) {
        c.gamma_limit = DistSpec::gamma(c.predicted_limit->p1);
    }
    c.claims = claims_for(c.predicted_limit.has_value(), c.mu.satisfies_c2);
}

// ---- the two-branch (left/right) family: A=1 or B=0 at every step ---------
//
// With probability p the particle moves left by a proportion drawn from
// left_prop, otherwise right by a proportion from right_prop:
//   left:  (A,B) = (1 - L, 0),  right: (A,B) = (1, R).
// Right moves have A = 1, so P(A=1) < 1 exactly when p > 0.
MuSampler two_branch_mu(double p, std::function<double(StreamKey&)> left_prop,
                        std::function<double(StreamKey&)> right_prop) {
    MuSampler mu;
    mu.m1 = true;
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = p > 0.0;
    mu.sample = [p, left = std::move(left_prop), right = std::move(right_prop)](
                    StreamKey& key) -> std::pair<double, double> {
        if (rng::next_u01(key) < p) return {1.0 - left(key), 0.0};
        return {1.0, right(key)};
    };
    return mu;
}

ModelCase make_m1_t1(const std::map<std::string, double>& params) {
    const double p = fetch("m1_t1", params, "p");
    check_keys("m1_t1", params, {"p"});
    require(p > 0.0 && p < 1.0, "m1_t1", "requires p in (0,1), got p=" + fmt(p));

    ModelCase c;
    c.name = "m1_t1";
    c.params = {{"p", p}};
    c.mu = two_branch_mu(
        p, [p](StreamKey&) { return 1.0 - p; }, [p](StreamKey&) { return p; });
    c.predicted_limit = DistSpec::beta(1.0, 1.0);
    c.classification = scheme(StageShape::split, 2, Rule::deterministic,
                              Mode::iid, Rule::random, Mode::iid);
    c.anchor = "fixed split at p, random side; uniform limit";
    finish(c);
    return c;
}

ModelCase make_m1_t2(const std::map<std::string, double>& params) {
    const double z = fetch("m1_t2", params, "z");
    const double p = fetch("m1_t2", params, "p");
    check_keys("m1_t2", params, {"z", "p"});
    require(z > 0.0, "m1_t2", "requires z > 0, got z=" + fmt(z));
    require(p > 0.0 && p < 1.0, "m1_t2", "requires p in (0,1), got p=" + fmt(p));

    ModelCase c;
    c.name = "m1_t2";
    c.params = {{"z", z}, {"p", p}};
    auto prop = [z](StreamKey& key) { return dist::beta_draw(1.0, z, key); };
    c.mu = two_branch_mu(p, prop, prop);
    c.predicted_limit = DistSpec::beta((1.0 - p) * z, p * z);
    c.classification = scheme(StageShape::general, 2, Rule::random, Mode::iid,
                              Rule::random, Mode::iid);
    c.anchor = "Beta(1,z) proportional moves; Kerov splitting at z=1";
    finish(c);
    return c;
}

ModelCase make_m1_t3(const std::map<std::string, double>& params) {
    const double y = fetch("m1_t3", params, "y");
    const double z = fetch("m1_t3", params, "z");
    check_keys("m1_t3", params, {"y", "z"});
    require(y > 0.0, "m1_t3", "requires y > 0, got y=" + fmt(y));
    require(z > 0.0, "m1_t3", "requires z > 0, got z=" + fmt(z));

    ModelCase c;
    c.name = "m1_t3";
    c.params = {{"y", y}, {"z", z}};
    const double p = y / (y + z);
    c.mu = two_branch_mu(
        p,
        [y, z](StreamKey& key) { return dist::beta_draw(1.0, y + z, key); },
        [y, z](StreamKey& key) { return dist::beta_draw(y, z + 1.0, key); });
    c.predicted_limit = DistSpec::beta(z, 1.0);
    c.classification = scheme(StageShape::general, 2, Rule::random, Mode::iid,
                              Rule::random, Mode::iid);
    c.anchor = "Beta(1,y+z) / Beta(y,z+1) moves at p=y/(y+z)";
    finish(c);
    return c;
}

ModelCase make_m1_t4(const std::map<std::string, double>& params) {
    const double y = fetch("m1_t4", params, "y");
    const double z = fetch("m1_t4", params, "z");
    check_keys("m1_t4", params, {"y", "z"});
    require(y > 0.0, "m1_t4", "requires y > 0, got y=" + fmt(y));
    require(z > 0.0, "m1_t4", "requires z > 0, got z=" + fmt(z));

    ModelCase c;
    c.name = "m1_t4";
    c.params = {{"y", y}, {"z", z}};
    const double p = y / (y + z);
    c.mu = two_branch_mu(
        p,
        [y, z](StreamKey& key) { return dist::beta_draw(z, y + 1.0, key); },
        [y, z](StreamKey& key) { return dist::beta_draw(y, z + 1.0, key); });
    c.predicted_limit = DistSpec::beta(1.0, 1.0);
    c.classification = scheme(StageShape::general, 2, Rule::random, Mode::iid,
                              Rule::random, Mode::iid);
    c.anchor = "Beta(z,y+1) / Beta(y,z+1) moves at p=y/(y+z); uniform limit";
    finish(c);
    return c;
}

ModelCase make_m1_t5(const std::map<std::string, double>& params) {
    const double z = fetch("m1_t5", params, "z");
    check_keys("m1_t5", params, {"z"});
    require(z > 0.0, "m1_t5", "requires z > 0, got z=" + fmt(z));

    ModelCase c;
    c.name = "m1_t5";
    c.params = {{"z", z}};
    auto prop = [z](StreamKey& key) {
        return 0.5 * dist::beta_draw(1.0, z, key);
    };
    c.mu = two_branch_mu(0.5, prop, prop);
    c.predicted_limit = DistSpec::beta(z + 1.0, z + 1.0);
    c.classification = scheme(StageShape::general, 2, Rule::random, Mode::iid,
                              Rule::random, Mode::iid);
    c.anchor = "half-interval Beta(1,z) moves, fair direction";
    finish(c);
    return c;
}

ModelCase make_cgz_tent(const std::map<std::string, double>& params) {
    const double z = fetch("cgz_tent", params, "z");
    check_keys("cgz_tent", params, {"z"});
    require(z > 0.0, "cgz_tent", "requires z > 0, got z=" + fmt(z));

    ModelCase c;
    c.name = "cgz_tent";
    c.params = {{"z", z}};
    MuSampler mu;
    mu.m1 = true;
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = true;
    mu.sample = [z](StreamKey& key) -> std::pair<double, double> {
        const double s = dist::tent_power_quantile(rng::next_u01_open(key), z);
        if (s > 0.5) return {s, 0.0};  // keep [0,s]
        return {1.0, s};               // keep [s,1]
    };
    c.mu = std::move(mu);
    c.predicted_limit = DistSpec::beta(z + 1.0, z + 1.0);
    c.classification = scheme(StageShape::split, 2, Rule::random, Mode::iid,
                              Rule::random, Mode::iid);
    c.anchor = "CGZ splitting, tent-power point, keep the larger side";
    finish(c);
    return c;
}

std::pair<double, double> cgz_pair(double u, bool keep_larger) {
    // Kept side as a map of [0,1]: [0,u] -> (u,0), [u,1] -> (1,u).
    const bool larger_is_left = u > 0.5;
    if (keep_larger == larger_is_left) return {u, 0.0};
    return {1.0, u};
}

ModelCase make_cgz_classic(const std::map<std::string, double>& params) {
    const double p = fetch("cgz_classic", params, "p");
    check_keys("cgz_classic", params, {"p"});
    require(p >= 0.0 && p <= 1.0, "cgz_classic",
            "requires p in [0,1], got p=" + fmt(p));

    ModelCase c;
    c.name = "cgz_classic";
    c.params = {{"p", p}};
    MuSampler mu;
    mu.m1 = true;
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = true;
    mu.sample = [p](StreamKey& key) -> std::pair<double, double> {
        const double u = rng::next_u01_open(key);
        const bool keep_larger = rng::next_u01(key) < p;
        return cgz_pair(u, keep_larger);
    };
    c.mu = std::move(mu);
    if (p == 1.0) {
        c.predicted_limit = DistSpec::beta(2.0, 2.0);
    } else if (p == 0.5) {
        c.predicted_limit = DistSpec::beta(0.5, 0.5);
    }
    c.classification = scheme(StageShape::split, 2, Rule::random, Mode::iid,
                              Rule::random, Mode::iid);
    c.anchor = "CGZ splitting, uniform point, keep larger side w.p. p";
    finish(c);
    return c;
}

ModelCase make_cgz_dual(const std::map<std::string, double>& params) {
    const double p = fetch("cgz_dual", params, "p");
    check_keys("cgz_dual", params, {"p"});
    require(p >= 0.0 && p <= 1.0, "cgz_dual",
            "requires p in [0,1], got p=" + fmt(p));

    ModelCase c;
    c.name = "cgz_dual";
    c.params = {{"p", p}};
    // Fair direction; given the direction, the move covers the nearest half
    // of the reachable interval w.p. p, the farthest half otherwise.
    auto prop = [p](StreamKey& key) {
        const double u = rng::next_u01_open(key);
        const bool near = rng::next_u01(key) < p;
        return near ? 0.5 * u : 0.5 + 0.5 * u;
    };
    c.mu = two_branch_mu(0.5, prop, prop);
    if (p == 1.0) {
        c.predicted_limit = DistSpec::beta(2.0, 2.0);
    } else if (p == 0.5) {
        c.predicted_limit = DistSpec::beta(0.5, 0.5);
    }
    c.classification = scheme(StageShape::general, 2, Rule::random, Mode::iid,
                              Rule::random, Mode::iid);
    c.anchor = "dual chain of the CGZ model: fair direction, near/far half";
    finish(c);
    return c;
}

ModelCase make_kennedy(const std::map<std::string, double>& params) {
    const double kd = fetch("kennedy", params, "k");
    const double p = fetch("kennedy", params, "p");
    const double q = fetch("kennedy", params, "q");
    const double r = fetch("kennedy", params, "r");
    check_keys("kennedy", params, {"k", "p", "q", "r"});
    require(kd >= 1.0 && kd <= 64.0 && kd == std::floor(kd), "kennedy",
            "requires integer k in [1,64], got k=" + fmt(kd));
    require(p >= 0.0 && q >= 0.0 && r >= 0.0, "kennedy",
            "requires p, q, r >= 0");
    require(std::fabs(p + q + r - 1.0) <= 1e-12, "kennedy",
            "requires p + q + r = 1, got sum=" + fmt(p + q + r));
    const int k = static_cast<int>(kd);

    ModelCase c;
    c.name = "kennedy";
    c.params = {{"k", kd}, {"p", p}, {"q", q}, {"r", r}};
    MuSampler mu;
    mu.m1 = true;
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = p < 1.0;
    mu.sample = [k, p, q](StreamKey& key) -> std::pair<double, double> {
        double umin = 1.0;
        double umax = 0.0;
        for (int i = 0; i < k; ++i) {
            const double u = rng::next_u01_open(key);
            umin = std::min(umin, u);
            umax = std::max(umax, u);
        }
        const double coin = rng::next_u01(key);
        if (coin < p) return {1.0, umin};      // keep [min, right end]
        if (coin < p + q) return {umax, 0.0};  // keep [left end, max]
        return {umax, umin};                   // keep [min, max]
    };
    c.mu = std::move(mu);
    const double a = kd * (p + r);
    const double b = kd * (q + r);
    if (a > 0.0 && b > 0.0) c.predicted_limit = DistSpec::beta(a, b);
    c.classification =
        scheme(k == 3 ? StageShape::split : StageShape::general, 3,
               Rule::random, Mode::iid, Rule::random, Mode::iid);
    c.anchor = "Kennedy order-statistics scheme on k uniform points";
    finish(c);
    return c;
}

ModelCase make_m2_dg(const std::map<std::string, double>& params) {
    const double w = fetch("m2_dg", params, "w");
    const double y = fetch("m2_dg", params, "y");
    const double z = fetch("m2_dg", params, "z");
    check_keys("m2_dg", params, {"w", "y", "z"});
    require(w > 0.0, "m2_dg", "requires w > 0, got w=" + fmt(w));
    require(y > 0.0, "m2_dg", "requires y > 0, got y=" + fmt(y));
    require(z > 0.0, "m2_dg", "requires z > 0, got z=" + fmt(z));

    ModelCase c;
    c.name = "m2_dg";
    c.params = {{"w", w}, {"y", y}, {"z", z}};
    MuSampler mu;
    mu.m2 = (w == y && y == z);
    mu.m3 = (w == z);
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = true;
    mu.sample = [w, y, z](StreamKey& key) -> std::pair<double, double> {
        const double a = dist::beta_draw(w, y, key);
        const double b = dist::beta_draw(y, z, key);
        return {a, b};
    };
    c.mu = std::move(mu);
    c.predicted_limit = DistSpec::beta(w + y, y + z);
    if (w == z) {
        c.classification = scheme(StageShape::general, 1, Rule::random,
                                  Mode::iid, Rule::deterministic, Mode::iid);
    } else {
        c.classification =
            scheme(StageShape::general, 1, Rule::random, Mode::general,
                   Rule::deterministic, Mode::general);
    }
    c.anchor = "independent Beta(w,y), Beta(y,z) endpoints (give-and-take)";
    finish(c);
    return c;
}

ModelCase make_m2_b1(const std::map<std::string, double>& params) {
    const double w = fetch("m2_b1", params, "w");
    const double y = fetch("m2_b1", params, "y");
    check_keys("m2_b1", params, {"w", "y"});
    require(w > 0.0, "m2_b1", "requires w > 0, got w=" + fmt(w));
    require(y > 0.0, "m2_b1", "requires y > 0, got y=" + fmt(y));

    ModelCase c;
    c.name = "m2_b1";
    c.params = {{"w", w}, {"y", y}};
    MuSampler mu;
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = true;
    mu.sample = [w, y](StreamKey& key) -> std::pair<double, double> {
        return {dist::beta_draw(w, y, key), 1.0};
    };
    c.mu = std::move(mu);
    c.predicted_limit = DistSpec::beta(w + y, y);
    c.classification = scheme(StageShape::split, 2, Rule::random, Mode::general,
                              Rule::deterministic, Mode::general);
    c.anchor = "Beta(w,y) splitting point, alternating kept side";
    finish(c);
    return c;
}

ModelCase make_m2_ub(const std::map<std::string, double>& params) {
    const double p = fetch("m2_ub", params, "p");
    check_keys("m2_ub", params, {"p"});
    require(p > 0.0 && p < 1.0, "m2_ub", "requires p in (0,1), got p=" + fmt(p));

    ModelCase c;
    c.name = "m2_ub";
    c.params = {{"p", p}};
    MuSampler mu;
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = true;
    mu.sample = [p](StreamKey& key) -> std::pair<double, double> {
        const double a = p + (1.0 - p) * rng::next_u01(key);
        const double b = rng::next_u01(key) < (1.0 - p) ? 1.0 : 0.0;
        return {a, b};
    };
    c.mu = std::move(mu);
    c.predicted_limit = DistSpec::beta(2.0, 1.0);
    c.anchor = "Uniform[p,1] coefficient with Bernoulli(1-p) companion";
    finish(c);
    return c;
}

ModelCase make_m2_gb4(const std::map<std::string, double>& params) {
    const double y = fetch("m2_gb4", params, "y");
    check_keys("m2_gb4", params, {"y"});
    require(y > 0.0, "m2_gb4", "requires y > 0, got y=" + fmt(y));

    ModelCase c;
    c.name = "m2_gb4";
    c.params = {{"y", y}};
    MuSampler mu;
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = true;
    const double hi = y / (y + 1.0);
    mu.sample = [hi, y](StreamKey& key) -> std::pair<double, double> {
        const double a = hi * rng::next_u01(key);
        const double b = dist::beta_draw(1.0, y, key);
        return {a, b};
    };
    c.mu = std::move(mu);
    c.predicted_limit = DistSpec::beta(2.0, y + 2.0);
    c.anchor = "Uniform[0,y/(y+1)] with Beta(1,y) companion";
    finish(c);
    return c;
}

ModelCase make_m2_s24(const std::map<std::string, double>& params) {
    const double w = fetch("m2_s24", params, "w");
    const double y = fetch("m2_s24", params, "y");
    check_keys("m2_s24", params, {"w", "y"});
    require(w > 0.0, "m2_s24", "requires w > 0, got w=" + fmt(w));
    require(y > 0.0, "m2_s24", "requires y > 0, got y=" + fmt(y));

    ModelCase c;
    c.name = "m2_s24";
    c.params = {{"w", w}, {"y", y}};
    MuSampler mu;
    mu.m1 = true;  // B = A*B' < A almost surely
    mu.satisfies_c1 = true;
    mu.satisfies_c2 = true;
    mu.sample = [w, y](StreamKey& key) -> std::pair<double, double> {
        const double a = dist::beta_draw(w + y, y, key);
        const double b = a * dist::beta_draw(y, w, key);
        return {a, b};
    };
    c.mu = std::move(mu);
    c.predicted_limit = DistSpec::beta(w + y, w + y);
    c.classification = scheme(StageShape::general, 1, Rule::random, Mode::iid,
                              Rule::deterministic, Mode::iid);
    c.anchor = "nested pair (A', A'B'); extends the order-statistics scheme";
    finish(c);
    return c;
}

}  // namespace

double ModelCase::param(const std::string& key) const {
    for (const auto& [k, v] : params) {
        if (k == key) return v;
    }
    throw std::invalid_argument(name + ": no parameter '" + key + "'");
}

const std::vector<ModelInfo>& catalog() {
    static const std::vector<ModelInfo> infos = {
        {"m1_t1", "p in (0,1)", "Beta(1,1)", "<S2,D_I|R_I>",
         "fixed split at p, random side; uniform limit"},
        {"m1_t2", "z > 0, p in (0,1)", "Beta((1-p)z, pz)", "<G2,R_I|R_I>",
         "Beta(1,z) proportional moves; Kerov splitting at z=1"},
        {"m1_t3", "y > 0, z > 0", "Beta(z,1)", "<G2,R_I|R_I>",
         "Beta(1,y+z) / Beta(y,z+1) moves at p=y/(y+z)"},
        {"m1_t4", "y > 0, z > 0", "Beta(1,1)", "<G2,R_I|R_I>",
         "Beta(z,y+1) / Beta(y,z+1) moves at p=y/(y+z); uniform limit"},
        {"m1_t5", "z > 0", "Beta(z+1,z+1)", "<G2,R_I|R_I>",
         "half-interval Beta(1,z) moves, fair direction"},
        {"cgz_tent", "z > 0", "Beta(z+1,z+1)", "<S2,R_I|R_I>",
         "CGZ splitting, tent-power point, keep the larger side"},
        {"cgz_classic", "p in [0,1]",
         "Beta(2,2) at p=1; Beta(1/2,1/2) at p=1/2; unknown otherwise",
         "<S2,R_I|R_I>", "CGZ splitting, uniform point, keep larger w.p. p"},
        {"cgz_dual", "p in [0,1]",
         "Beta(2,2) at p=1; Beta(1/2,1/2) at p=1/2; unknown otherwise",
         "<G2,R_I|R_I>", "dual chain of the CGZ model: fair direction, near/far half"},
        {"kennedy", "integer k >= 1; p, q, r >= 0 with p+q+r = 1",
         "Beta(k(p+r), k(q+r)) when both parameters are positive",
         "<S3,R_I|R_I> (k=3) / <G3,R_I|R_I>",
         "Kennedy order-statistics scheme on k uniform points"},
        {"m2_dg", "w, y, z > 0", "Beta(w+y, y+z)", "<G1,R_I|D_I> when w=z",
         "independent Beta(w,y), Beta(y,z) endpoints (give-and-take)"},
        {"m2_b1", "w, y > 0", "Beta(w+y, y)", "<S2,R_G|D_G>",
         "Beta(w,y) splitting point, alternating kept side"},
        {"m2_ub", "p in (0,1)", "Beta(2,1)", "-",
         "Uniform[p,1] coefficient with Bernoulli(1-p) companion"},
        {"m2_gb4", "y > 0", "Beta(2, y+2)", "-",
         "Uniform[0,y/(y+1)] with Beta(1,y) companion"},
        {"m2_s24", "w, y > 0", "Beta(w+y, w+y)", "<G1,R_I|D_I>",
         "nested pair (A', A'B'); extends the order-statistics scheme"},
    };
    return infos;
}

ModelCase build_case(const std::string& name,
                     const std::map<std::string, double>& params) {
    if (name == "m1_t1") return make_m1_t1(params);
    if (name == "m1_t2") return make_m1_t2(params);
    if (name == "m1_t3") return make_m1_t3(params);
    if (name == "m1_t4") return make_m1_t4(params);
    if (name == "m1_t5") return make_m1_t5(params);
    if (name == "cgz_tent") return make_cgz_tent(params);
    if (name == "cgz_classic") return make_cgz_classic(params);
    if (name == "cgz_dual") return make_cgz_dual(params);
    if (name == "kennedy") return make_kennedy(params);
    if (name == "m2_dg") return make_m2_dg(params);
    if (name == "m2_b1") return make_m2_b1(params);
    if (name == "m2_ub") return make_m2_ub(params);
    if (name == "m2_gb4") return make_m2_gb4(params);
    if (name == "m2_s24") return make_m2_s24(params);
    throw std::invalid_argument("build_case: unknown model '" + name + "'");
}

std::optional<dist::DistSpec> predicted_limit(const ModelCase& c) {
    return c.predicted_limit;
}

std::optional<std::pair<dist::DistSpec, dist::DistSpec>> perpetuity_form(
    const ModelCase& c) {
    if (c.name == "m1_t2") {
        const double z = c.param("z");
        const double p = c.param("p");
        return std::make_pair(dist::DistSpec::beta(1.0, z),
                              dist::DistSpec::bernoulli(1.0 - p));
    }
    if (c.name == "m2_s24") {
        const double w = c.param("w");
        const double y = c.param("y");
        return std::make_pair(dist::DistSpec::beta(2.0 * y, w),
                              dist::DistSpec::beta(y, y));
    }
    return std::nullopt;
}

}  // namespace betaflow::models
