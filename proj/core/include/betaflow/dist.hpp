#pragma once

#include <string>

#include "betaflow/rng.hpp"

namespace betaflow::dist {

enum class Kind { uniform, bernoulli, beta, gamma, point_mass, tent_power };

/// Parameter record naming a scalar law.
///
/// Parameter slots by kind:
///   uniform(lo, hi)      lo < hi
///   bernoulli(p)         p in [0,1]
///   beta(a, b)           a, b > 0
///   gamma(shape)         shape > 0, unit scale
///   point_mass(c)        c in [0,1]
///   tent_power(z)        z > 0; density z(1-2u)^{z-1} on (0,1/2),
///                        z(2u-1)^{z-1} on [1/2,1)
struct DistSpec {
    Kind kind = Kind::uniform;
    double p1 = 0.0;
    double p2 = 1.0;

    static DistSpec uniform(double lo, double hi);
    static DistSpec bernoulli(double p);
    static DistSpec beta(double a, double b);
    static DistSpec gamma(double shape);
    static DistSpec point_mass(double c);
    static DistSpec tent_power(double z);

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    /// CDF evaluated on the whole real line.
    double cdf(double x) const;

    /// Human-readable label, e.g. "Beta(2,2)".
    std::string name() const;
};

/// One variate with the exact law of spec; advances key.counter.
/// Beta draws use a ratio of two gamma draws; gamma draws use a
/// squeeze/rejection method (shape < 1 boosted through shape + 1);
/// tent-power draws invert the closed-form CDF.
double draw(const DistSpec& spec, rng::StreamKey& key);

/// Standard normal via Box-Muller (two uniforms per call, no cached state).
double normal_draw(rng::StreamKey& key);

/// Gamma(shape, 1) via Marsaglia-Tsang squeeze/rejection; shape < 1 uses
/// the U^{1/shape} boost on a shape+1 draw.
double gamma_draw(double shape, rng::StreamKey& key);

/// Beta(a, b) as Ga/(Ga+Gb) for independent gamma draws.
double beta_draw(double a, double b, rng::StreamKey& key);

/// Inverse CDF of the tent-power law: F(s) = (1-(1-2s)^z)/2 for s < 1/2 and
/// F(s) = (1+(2s-1)^z)/2 for s >= 1/2. Domain errors outside u in [0,1],
/// z > 0.
double tent_power_quantile(double u, double z);

}  // namespace betaflow::dist
