#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betaflow/dist.hpp"
#include "betaflow/rng.hpp"
#include "betaflow/stats.hpp"

namespace betaflow::identities {

/// One distributional identity: a generated side and either a second
/// generated side (two-sample KS) or a named reference law (one-sample KS).
struct IdentityCase {
    std::string name;  // e.g. "id_perp[z=1,p=0.5]"
    std::string base;  // e.g. "id_perp"
    std::vector<std::pair<std::string, double>> params;
    std::function<double(rng::StreamKey&)> lhs;
    std::function<double(rng::StreamKey&)> rhs;  // unused when rhs_law is set
    std::optional<dist::DistSpec> rhs_law;
    std::string anchor;
};

/// Builds an identity by base name. The model-bound identities take the
/// model name after a colon ("id_a1prime:m1_t2") with the model's
/// parameters; the (a,b) pair comes from the model's predicted limit.
///
/// Bases: id_a1prime:<model>, id_a1doubleprime:<model>, id_perp(z,p),
/// id_polya(b,w), id_randgam(y), id_randgam_exp, id_asl_full, id_asl_neg,
/// id_bga_prod(a,b,c), id_bga_gamma(a,b), id_gb4(w,y), id_polya_limit(b,w),
/// id_dufresne(w,y).
IdentityCase make_identity(const std::string& name,
                           const std::map<std::string, double>& params);

/// KS verdict on n draws of each side (one-sample against rhs_law when the
/// reference side is a named law). Deterministic given key.
stats::KsReport check_identity(const IdentityCase& c, std::size_t n,
                               double alpha, const rng::StreamKey& key);

/// The versioned default parameter grid: every identity, parameterized ones
/// at >= 3 points including an asymmetric one.
std::vector<IdentityCase> default_suite();

/// Runs every default-suite identity whose name matches the pattern
/// ('*' wildcards) with n draws per side; deterministic given seed.
std::vector<stats::KsReport> run_suite(const std::string& filter,
                                       std::size_t n, double alpha,
                                       std::uint64_t seed);

/// Simple '*' glob match, used for suite filters.
bool name_matches(const std::string& pattern, const std::string& name);

}  // namespace betaflow::identities
