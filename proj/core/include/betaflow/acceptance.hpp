#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betaflow/stats.hpp"

namespace betaflow::acceptance {

/// One verification criterion: KS-style line items plus free-form notes for
/// the deterministic numeric checks.
struct CriterionResult {
    int index = 0;
    std::string name;
    std::vector<stats::KsReport> reports;
    std::vector<std::string> notes;
    std::size_t items = 0;
    std::size_t failures = 0;
    bool pass = false;  // failures == 0

    std::string summary() const;
};

struct VerifyResult {
    std::uint64_t seed = 0;
    double alpha = 0.0;
    std::vector<CriterionResult> criteria;
    std::size_t total_items = 0;
    std::size_t total_failures = 0;
    bool pass = false;  // total_failures <= 1

    std::string to_json() const;
};

/// Runs the full verification battery (fixed grids, streams derived from
/// seed, thresholds pinned in code):
///   1. backward limits vs the predicted Beta(a,b) across the catalog grid
///   2. forward-vs-backward duality for six representative cases
///   3. gamma-side chain vs Gamma(a) for the same six cases
///   4. the distributional-identity suite at its default grids
///   5. the two hypergeometric identity chains on a 5x5x5 grid, to 1e-8
///   6. incomplete beta/gamma vs adaptive Simpson oracles, to 1e-10
///   7. negative control: Gamma(2) vs Gamma(2.2) KS must reject
/// The battery passes when at most one individual item fails. Deterministic
/// given (seed, alpha); workers only split sample loops.
VerifyResult run_verify(std::uint64_t seed = 42, double alpha = 1e-3,
                        std::size_t workers = 1);

}  // namespace betaflow::acceptance
