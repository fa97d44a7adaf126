#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "betaflow/dist.hpp"
#include "betaflow/ifs.hpp"

namespace betaflow::models {

/// The five equivalent limit-law claims a case can carry:
///   a1_gamma     V1 ~ Gamma(a) solves V1 =d= A V1 + B V2, V2 ~ Gamma(b)
///   a1_beta      X ~ Beta(a,b) solves X =d= A X + B (1-X)
///   a2_backward  backward compositions converge a.s. to a Beta(a,b) point
///   a3_forward   the [0,1] chain has stationary law Beta(a,b)
///   a4_gamma     the R+ chain has stationary law Gamma(a)
enum class Claim { a1_gamma, a1_beta, a2_backward, a3_forward, a4_gamma };

/// A fully wired catalog instance: sampler, predicted laws, taxonomy.
struct ModelCase {
    std::string name;
    std::vector<std::pair<std::string, double>> params;  // declaration order
    ifs::MuSampler mu;
    std::optional<dist::DistSpec> predicted_limit;  // Beta(a,b)
    std::optional<dist::DistSpec> gamma_limit;      // Gamma(a), same a
    std::optional<ifs::SchemeClass> classification;
    std::set<Claim> claims;
    std::string anchor;

    double param(const std::string& key) const;
};

/// Catalog entry metadata for listings.
struct ModelInfo {
    std::string name;
    std::string param_spec;
    std::string limit;
    std::string scheme;
    std::string anchor;
};

const std::vector<ModelInfo>& catalog();

/// Builds a catalog case by name. Parameter ranges are validated strictly
/// (open bounds where the underlying statement has them); violations throw
/// std::invalid_argument naming the offending parameter.
///
/// Catalog (mu construction -> predicted Beta(a,b)):
///   m1_t1(p)        move left to proportion p of [0,x] w.p. p, else right
///                   by proportion p of [x,1]            -> Beta(1,1)
///   m1_t2(z,p)      proportions ~ Beta(1,z) both sides   -> Beta((1-p)z, pz)
///   m1_t3(y,z)      L ~ Beta(1,y+z), R ~ Beta(y,z+1), p=y/(y+z) -> Beta(z,1)
///   m1_t4(y,z)      L ~ Beta(z,y+1), R ~ Beta(y,z+1), p=y/(y+z) -> Beta(1,1)
///   m1_t5(z)        2L =d= 2R ~ Beta(1,z), fair coin     -> Beta(z+1,z+1)
///   cgz_tent(z)     tent-power splitting point, keep the larger side
///                                                        -> Beta(z+1,z+1)
///   cgz_classic(p)  uniform splitting point, keep larger side w.p. p
///                   -> Beta(2,2) at p=1, Beta(1/2,1/2) at p=1/2, else none
///   cgz_dual(p)     dual chain: fair direction, then near half w.p. p,
///                   far half otherwise; same predicted limits
///   kennedy(k,p,q,r) k uniform points, keep [min,1] / [0,max] / [min,max]
///                   w.p. p / q / r                      -> Beta(k(p+r), k(q+r))
///                   (a side with zero weight degenerates; limit then none)
///   m2_dg(w,y,z)    (A,B) ~ Beta(w,y) x Beta(y,z)        -> Beta(w+y, y+z)
///   m2_b1(w,y)      A ~ Beta(w,y), B = 1                 -> Beta(w+y, y)
///   m2_ub(p)        (A,B) ~ Uniform[p,1] x Bernoulli(1-p) -> Beta(2,1)
///   m2_gb4(y)       (A,B) ~ Uniform[0,y/(y+1)] x Beta(1,y) -> Beta(2, y+2)
///   m2_s24(w,y)     (A,B) = (A', A'B'), (A',B') ~ Beta(w+y,y) x Beta(y,w)
///                                                        -> Beta(w+y, w+y)
ModelCase build_case(const std::string& name,
                     const std::map<std::string, double>& params);

/// Predicted Beta(a,b) when a stationarity claim applies; nullopt otherwise
/// (e.g. cgz_classic away from p in {1/2, 1}).
std::optional<dist::DistSpec> predicted_limit(const ModelCase& c);

/// Law of the (C,D) pair in the perpetuity form X =d= (1-C)X + CD, known for
/// m1_t2 (Beta(1,z), Bernoulli(1-p)) and m2_s24 (Beta(2y,w), Beta(y,y)).
std::optional<std::pair<dist::DistSpec, dist::DistSpec>> perpetuity_form(
    const ModelCase& c);

}  // namespace betaflow::models
