#include "betaflow/dist.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "betaflow/specfun.hpp"

namespace betaflow::dist {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676655900577;

[[noreturn]] void bad_param(const std::string& what) {
    throw std::invalid_argument("DistSpec: " + what);
}
}  // namespace

DistSpec DistSpec::uniform(double lo, double hi) {
    DistSpec s{Kind::uniform, lo, hi};
    s.validate();
    return s;
}
DistSpec DistSpec::bernoulli(double p) {
    DistSpec s{Kind::bernoulli, p, 0.0};
    s.validate();
    return s;
}
DistSpec DistSpec::beta(double a, double b) {
    DistSpec s{Kind::beta, a, b};
    s.validate();
    return s;
}
DistSpec DistSpec::gamma(double shape) {
    DistSpec s{Kind::gamma, shape, 0.0};
    s.validate();
    return s;
}
DistSpec DistSpec::point_mass(double c) {
    DistSpec s{Kind::point_mass, c, 0.0};
    s.validate();
    return s;
}
DistSpec DistSpec::tent_power(double z) {
    DistSpec s{Kind::tent_power, z, 0.0};
    s.validate();
    return s;
}

void DistSpec::validate() const {
    switch (kind) {
        case Kind::uniform:
            if (!(p1 < p2)) bad_param("Uniform requires lo < hi");
            return;
        case Kind::bernoulli:
            if (!(p1 >= 0.0 && p1 <= 1.0))
                bad_param("Bernoulli requires p in [0,1]");
            return;
        case Kind::beta:
            if (!(p1 > 0.0 && p2 > 0.0))
                bad_param("Beta requires a > 0 and b > 0");
            return;
        case Kind::gamma:
            if (!(p1 > 0.0)) bad_param("Gamma requires shape > 0");
            return;
        case Kind::point_mass:
            if (!(p1 >= 0.0 && p1 <= 1.0))
                bad_param("PointMass requires c in [0,1]");
            return;
        case Kind::tent_power:
            if (!(p1 > 0.0)) bad_param("TentPower requires z > 0");
            return;
    }
    bad_param("unknown kind");
}

double DistSpec::cdf(double x) const {
    switch (kind) {
        case Kind::uniform: {
            if (x <= p1) return 0.0;
            if (x >= p2) return 1.0;
            return (x - p1) / (p2 - p1);
        }
        case Kind::bernoulli: {
            if (x < 0.0) return 0.0;
            if (x < 1.0) return 1.0 - p1;
            return 1.0;
        }
        case Kind::beta: {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return specfun::reg_inc_beta(x, p1, p2);
        }
        case Kind::gamma: {
            if (x <= 0.0) return 0.0;
            return specfun::reg_inc_gamma(p1, x);
        }
        case Kind::point_mass:
            return x < p1 ? 0.0 : 1.0;
        case Kind::tent_power: {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            const double z = p1;
            if (x < 0.5) return 0.5 * (1.0 - std::pow(1.0 - 2.0 * x, z));
            return 0.5 * (1.0 + std::pow(2.0 * x - 1.0, z));
        }
    }
    throw std::logic_error("DistSpec::cdf: unknown kind");
}

std::string DistSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::uniform:
            os << "Uniform(" << p1 << "," << p2 << ")";
            break;
        case Kind::bernoulli:
            os << "Bernoulli(" << p1 << ")";
            break;
        case Kind::beta:
            os << "Beta(" << p1 << "," << p2 << ")";
            break;
        case Kind::gamma:
            os << "Gamma(" << p1 << ")";
            break;
        case Kind::point_mass:
            os << "PointMass(" << p1 << ")";
            break;
        case Kind::tent_power:
            os << "TentPower(" << p1 << ")";
            break;
    }
    return os.str();
}

double normal_draw(rng::StreamKey& key) {
    const double u1 = rng::next_u01_open(key);
    const double u2 = rng::next_u01(key);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double gamma_draw(double shape, rng::StreamKey& key) {
    if (!(shape > 0.0)) {
        throw std::invalid_argument("gamma_draw: requires shape > 0");
    }
    if (shape < 1.0) {
        const double u = rng::next_u01_open(key);
        return gamma_draw(shape + 1.0, key) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang (2000): X = d*(1+c*N)^3 with squeeze then log check.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x;
        double v;
        do {
            x = normal_draw(key);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng::next_u01_open(key);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double beta_draw(double a, double b, rng::StreamKey& key) {
    const double ga = gamma_draw(a, key);
    const double gb = gamma_draw(b, key);
    return ga / (ga + gb);
}

double tent_power_quantile(double u, double z) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("tent_power_quantile: requires u in [0,1]");
    }
    if (!(z > 0.0)) {
        throw std::domain_error("tent_power_quantile: requires z > 0");
    }
    if (u < 0.5) return 0.5 * (1.0 - std::pow(1.0 - 2.0 * u, 1.0 / z));
    return 0.5 * (1.0 + std::pow(2.0 * u - 1.0, 1.0 / z));
}

double draw(const DistSpec& spec, rng::StreamKey& key) {
    spec.validate();
    switch (spec.kind) {
        case Kind::uniform:
            return spec.p1 + (spec.p2 - spec.p1) * rng::next_u01(key);
        case Kind::bernoulli:
            return rng::next_u01(key) < spec.p1 ? 1.0 : 0.0;
        case Kind::beta:
            return beta_draw(spec.p1, spec.p2, key);
        case Kind::gamma:
            return gamma_draw(spec.p1, key);
        case Kind::point_mass:
            return spec.p1;
        case Kind::tent_power:
            return tent_power_quantile(rng::next_u01(key), spec.p1);
    }
    throw std::logic_error("draw: unknown kind");
}

}  // namespace betaflow::dist
