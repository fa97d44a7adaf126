#include "betaflow/identities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "betaflow/models.hpp"

namespace betaflow::identities {

namespace {

using dist::DistSpec;
using rng::StreamKey;

// Urn draws used by id_polya_limit. Large enough that the discretization of
// the finite-draw proportion sits far below the KS resolution at n = 1e5.
constexpr int kUrnSteps = 2048;

double fetch(const std::string& who,
             const std::map<std::string, double>& params,
             const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) {
        throw std::invalid_argument(who + ": missing parameter '" + key + "'");
    }
    return it->second;
}

void require(bool ok, const std::string& who, const std::string& what) {
    if (!ok) throw std::invalid_argument(who + ": " + what);
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string label(const std::string& base,
                  const std::vector<std::pair<std::string, double>>& params) {
    std::string s = base;
    if (!params.empty()) {
        s += '[';
        bool first = true;
        for (const auto& [k, v] : params) {
            if (!first) s += ',';
            first = false;
            s += k + '=' + fmt(v);
        }
        s += ']';
    }
    return s;
}

IdentityCase model_bound_identity(const std::string& base,
                                  const std::string& model_name,
                                  const std::map<std::string, double>& params) {
    const models::ModelCase model = models::build_case(model_name, params);
    if (!model.predicted_limit) {
        throw std::invalid_argument(base + ": model '" + model_name +
                                    "' has no predicted limit law");
    }
    const double a = model.predicted_limit->p1;
    const double b = model.predicted_limit->p2;

    IdentityCase c;
    c.base = base + ":" + model_name;
    c.params = model.params;
    c.name = label(c.base, c.params);
    if (base == "id_a1prime") {
        // A V1 + B V2 against Gamma(a), (V1,V2) ~ Gamma(a) x Gamma(b).
        c.lhs = [mu = model.mu, a, b](StreamKey& key) {
            const auto [av, bv] = mu.sample(key);
            return av * dist::gamma_draw(a, key) +
                   bv * dist::gamma_draw(b, key);
        };
        c.rhs_law = DistSpec::gamma(a);
        c.anchor = "gamma fixed point of V =d= AV1 + BV2";
    } else {
        // A X + B (1-X) against Beta(a,b), X ~ Beta(a,b).
        c.lhs = [mu = model.mu, a, b](StreamKey& key) {
            const auto [av, bv] = mu.sample(key);
            const double x = dist::beta_draw(a, b, key);
            return av * x + bv * (1.0 - x);
        };
        c.rhs_law = DistSpec::beta(a, b);
        c.anchor = "beta fixed point of X =d= AX + B(1-X)";
    }
    return c;
}

}  // namespace

IdentityCase make_identity(const std::string& name,
                           const std::map<std::string, double>& params) {
    if (const auto colon = name.find(':'); colon != std::string::npos) {
        const std::string base = name.substr(0, colon);
        const std::string model = name.substr(colon + 1);
        require(base == "id_a1prime" || base == "id_a1doubleprime", name,
                "only id_a1prime / id_a1doubleprime take a model suffix");
        return model_bound_identity(base, model, params);
    }

    IdentityCase c;
    c.base = name;

    if (name == "id_perp") {
        const double z = fetch(name, params, "z");
        const double p = fetch(name, params, "p");
        require(z > 0.0, name, "requires z > 0, got z=" + fmt(z));
        require(p > 0.0 && p < 1.0, name, "requires p in (0,1), got p=" + fmt(p));
        c.params = {{"z", z}, {"p", p}};
        // (1-C)X + CD with (C,D) ~ Beta(1,z) x Bernoulli(1-p),
        // X ~ Beta((1-p)z, pz).
        c.lhs = [z, p](StreamKey& key) {
            const double cc = dist::beta_draw(1.0, z, key);
            const double dd = rng::next_u01(key) < (1.0 - p) ? 1.0 : 0.0;
            const double x = dist::beta_draw((1.0 - p) * z, p * z, key);
            return (1.0 - cc) * x + cc * dd;
        };
        c.rhs_law = DistSpec::beta((1.0 - p) * z, p * z);
        c.anchor = "perpetuity form X =d= (1-C)X + CD";
    } else if (name == "id_polya") {
        const double b = fetch(name, params, "b");
        const double w = fetch(name, params, "w");
        require(b > 0.0 && w > 0.0, name, "requires b, w > 0");
        c.params = {{"b", b}, {"w", w}};
        // One-draw urn decomposition of Beta(b,w).
        c.lhs = [b, w](StreamKey& key) {
            if (rng::next_u01(key) < b / (b + w)) {
                return dist::beta_draw(b + 1.0, w, key);
            }
            return dist::beta_draw(b, w + 1.0, key);
        };
        c.rhs_law = DistSpec::beta(b, w);
        c.anchor = "one-step urn mixture of Beta(b+1,w) and Beta(b,w+1)";
    } else if (name == "id_randgam") {
        const double y = fetch(name, params, "y");
        require(y > 0.0, name, "requires y > 0, got y=" + fmt(y));
        c.params = {{"y", y}};
        // U G(y+1) =d= U G(1) + G(y U1) with a freshly drawn random shape.
        c.lhs = [y](StreamKey& key) {
            return rng::next_u01(key) * dist::gamma_draw(y + 1.0, key);
        };
        c.rhs = [y](StreamKey& key) {
            const double u = rng::next_u01(key);
            const double e = dist::gamma_draw(1.0, key);
            const double shape = y * rng::next_u01(key);
            const double g = shape > 0.0 ? dist::gamma_draw(shape, key) : 0.0;
            return u * e + g;
        };
        c.anchor = "uniform-thinned gamma vs exponential plus random-shape gamma";
    } else if (name == "id_randgam_exp") {
        require(params.empty(), name, "takes no parameters");
        c.lhs = [](StreamKey& key) {
            const double u = rng::next_u01(key);
            const double e = dist::gamma_draw(1.0, key);
            const double shape = rng::next_u01(key);
            const double g = shape > 0.0 ? dist::gamma_draw(shape, key) : 0.0;
            return u * e + g;
        };
        c.rhs_law = DistSpec::gamma(1.0);
        c.anchor = "U Exp + Gamma(U1) is exponential";
    } else if (name == "id_asl_full") {
        require(params.empty(), name, "takes no parameters");
        // U tau + I (1 - tau) ~ Beta(1/2,1/2),
        // (U, I, tau) ~ U[0,1] x Bernoulli(1/2) x Beta(1/2,1/2).
        c.lhs = [](StreamKey& key) {
            const double u = rng::next_u01(key);
            const bool i = rng::next_u01(key) < 0.5;
            const double tau = dist::beta_draw(0.5, 0.5, key);
            return u * tau + (i ? 1.0 - tau : 0.0);
        };
        c.rhs_law = DistSpec::beta(0.5, 0.5);
        c.anchor = "arcsine decomposition over the last zero";
    } else if (name == "id_asl_neg") {
        require(params.empty(), name, "takes no parameters");
        c.lhs = [](StreamKey& key) {
            return rng::next_u01(key) * dist::beta_draw(0.5, 0.5, key);
        };
        c.rhs_law = DistSpec::beta(0.5, 1.5);
        c.anchor = "one-sided occupation time: U tau ~ Beta(1/2,3/2)";
    } else if (name == "id_bga_prod") {
        const double a = fetch(name, params, "a");
        const double b = fetch(name, params, "b");
        const double cc = fetch(name, params, "c");
        require(a > 0.0 && b > 0.0 && cc > 0.0, name, "requires a, b, c > 0");
        c.params = {{"a", a}, {"b", b}, {"c", cc}};
        c.lhs = [a, b, cc](StreamKey& key) {
            return dist::beta_draw(a + b, cc, key) * dist::beta_draw(a, b, key);
        };
        c.rhs_law = DistSpec::beta(a, b + cc);
        c.anchor = "beta product contraction AB =d= C";
    } else if (name == "id_bga_gamma") {
        const double a = fetch(name, params, "a");
        const double b = fetch(name, params, "b");
        require(a > 0.0 && b > 0.0, name, "requires a, b > 0");
        c.params = {{"a", a}, {"b", b}};
        c.lhs = [a, b](StreamKey& key) {
            return dist::beta_draw(a, b, key) * dist::gamma_draw(a + b, key);
        };
        c.rhs_law = DistSpec::gamma(a);
        c.anchor = "beta-gamma algebra: Beta(a,b) Gamma(a+b) ~ Gamma(a)";
    } else if (name == "id_gb4") {
        const double w = fetch(name, params, "w");
        const double y = fetch(name, params, "y");
        require(w > 0.0 && y > 0.0, name, "requires w, y > 0");
        c.params = {{"w", w}, {"y", y}};
        const double hi = y / (w + y);
        c.lhs = [hi, w, y](StreamKey& key) {
            const double a = hi * rng::next_u01(key);
            const double b = dist::beta_draw(w, y, key);
            return a * dist::gamma_draw(2.0, key) +
                   b * dist::gamma_draw(w + y + 1.0, key);
        };
        c.rhs_law = DistSpec::gamma(w + 1.0);
        c.anchor = "AV1 + BV2 ~ Gamma(w+1) for the uniform-beta pair";
    } else if (name == "id_polya_limit") {
        const double b = fetch(name, params, "b");
        const double w = fetch(name, params, "w");
        require(b >= 1.0 && w >= 1.0, name,
                "requires b, w >= 1 (edge mass of the finite urn stays below "
                "the KS resolution)");
        c.params = {{"b", b}, {"w", w}};
        c.lhs = [b, w](StreamKey& key) {
            double blacks = b;
            double whites = w;
            for (int i = 0; i < kUrnSteps; ++i) {
                if (rng::next_u01(key) < blacks / (blacks + whites)) {
                    blacks += 1.0;
                } else {
                    whites += 1.0;
                }
            }
            return blacks / (blacks + whites);
        };
        c.rhs_law = DistSpec::beta(b, w);
        c.anchor = "urn proportion after many draws vs its martingale limit";
    } else if (name == "id_dufresne") {
        const double w = fetch(name, params, "w");
        const double y = fetch(name, params, "y");
        require(w > 0.0 && y > 0.0, name, "requires w, y > 0");
        c.params = {{"w", w}, {"y", y}};
        // X(V1+V2+V3) =d= X V2 + V1 for X ~ Beta(w+y,w+y),
        // (V1,V2,V3) ~ Gamma(y) x Gamma(w) x Gamma(y).
        c.lhs = [w, y](StreamKey& key) {
            const double x = dist::beta_draw(w + y, w + y, key);
            return x * (dist::gamma_draw(y, key) + dist::gamma_draw(w, key) +
                        dist::gamma_draw(y, key));
        };
        c.rhs = [w, y](StreamKey& key) {
            const double x = dist::beta_draw(w + y, w + y, key);
            return x * dist::gamma_draw(w, key) + dist::gamma_draw(y, key);
        };
        c.anchor = "scaled gamma triple vs its two-term reduction";
    } else {
        throw std::invalid_argument("make_identity: unknown identity '" + name +
                                    "'");
    }

    c.name = label(c.base, c.params);
    return c;
}

stats::KsReport check_identity(const IdentityCase& c, std::size_t n,
                               double alpha, const rng::StreamKey& key) {
    if (n < 1) throw std::invalid_argument("check_identity: n must be >= 1");

    rng::StreamKey lhs_key = rng::fork(key, 1);
    std::vector<double> lhs(n);
    for (std::size_t i = 0; i < n; ++i) lhs[i] = c.lhs(lhs_key);
    std::sort(lhs.begin(), lhs.end());

    if (c.rhs_law) {
        const dist::DistSpec law = *c.rhs_law;
        return stats::ks_one_sample(
            lhs, [law](double x) { return law.cdf(x); }, alpha, c.name);
    }
    if (!c.rhs) {
        throw std::invalid_argument("check_identity: case '" + c.name +
                                    "' has no reference side");
    }
    rng::StreamKey rhs_key = rng::fork(key, 2);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = c.rhs(rhs_key);
    std::sort(rhs.begin(), rhs.end());
    return stats::ks_two_sample(lhs, rhs, alpha, c.name);
}

std::vector<IdentityCase> default_suite() {
    using P = std::map<std::string, double>;
    std::vector<IdentityCase> suite;
    auto add = [&suite](const std::string& name, const P& params) {
        suite.push_back(make_identity(name, params));
    };

    add("id_a1prime:m1_t1", {{"p", 0.5}});
    add("id_a1prime:m1_t3", {{"y", 2.0}, {"z", 0.7}});
    add("id_a1prime:m2_gb4", {{"y", 1.0}});

    add("id_a1doubleprime:m1_t5", {{"z", 2.0}});
    add("id_a1doubleprime:m2_ub", {{"p", 0.25}});
    add("id_a1doubleprime:m2_s24", {{"w", 2.0}, {"y", 1.0}});

    add("id_perp", {{"z", 1.0}, {"p", 0.5}});
    add("id_perp", {{"z", 2.0}, {"p", 0.3}});
    add("id_perp", {{"z", 0.5}, {"p", 0.8}});

    add("id_polya", {{"b", 1.0}, {"w", 1.0}});
    add("id_polya", {{"b", 2.0}, {"w", 1.0}});
    add("id_polya", {{"b", 3.0}, {"w", 2.0}});

    add("id_randgam", {{"y", 0.5}});
    add("id_randgam", {{"y", 1.0}});
    add("id_randgam", {{"y", 2.0}});

    add("id_randgam_exp", {});
    add("id_asl_full", {});
    add("id_asl_neg", {});

    add("id_bga_prod", {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
    add("id_bga_prod", {{"a", 0.5}, {"b", 1.5}, {"c", 2.0}});
    add("id_bga_prod", {{"a", 2.0}, {"b", 3.0}, {"c", 1.0}});

    add("id_bga_gamma", {{"a", 1.0}, {"b", 1.0}});
    add("id_bga_gamma", {{"a", 2.5}, {"b", 0.5}});
    add("id_bga_gamma", {{"a", 0.7}, {"b", 1.3}});

    add("id_gb4", {{"w", 1.0}, {"y", 1.0}});
    add("id_gb4", {{"w", 2.0}, {"y", 1.0}});
    add("id_gb4", {{"w", 0.5}, {"y", 1.5}});

    add("id_polya_limit", {{"b", 1.0}, {"w", 1.0}});
    add("id_polya_limit", {{"b", 2.0}, {"w", 1.0}});
    add("id_polya_limit", {{"b", 3.0}, {"w", 2.0}});

    add("id_dufresne", {{"w", 1.0}, {"y", 1.0}});
    add("id_dufresne", {{"w", 2.0}, {"y", 1.0}});
    add("id_dufresne", {{"w", 1.5}, {"y", 0.5}});

    return suite;
}

bool name_matches(const std::string& pattern, const std::string& name) {
    // Greedy '*' glob, iterative with backtracking.
    std::size_t p = 0;
    std::size_t s = 0;
    std::size_t star = std::string::npos;
    std::size_t mark = 0;
    while (s < name.size()) {
        if (p < pattern.size() &&
            (pattern[p] == name[s] || pattern[p] == '?')) {
            ++p;
            ++s;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<stats::KsReport> run_suite(const std::string& filter,
                                       std::size_t n, double alpha,
                                       std::uint64_t seed) {
    const rng::StreamKey root{seed, 0, 0};
    const auto suite = default_suite();
    std::vector<stats::KsReport> reports;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        // Streams keyed by the manifest position, so a filtered run sees the
        // same draws for a case as the full suite does.
        if (!name_matches(filter, suite[i].name) &&
            !name_matches(filter, suite[i].base)) {
            continue;
        }
        reports.push_back(
            check_identity(suite[i], n, alpha, rng::fork(root, 0x1D0000 + i)));
    }
    return reports;
}

}  // namespace betaflow::identities
