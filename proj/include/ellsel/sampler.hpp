#pragma once

#include <cstdint>
#include <utility>

#include "ellsel/families.hpp"

namespace ellsel {

struct DrawRequest {
    Family family = Family::beta_k1;
    std::string variant;
    Shapes shapes;
    int n = 1;
    std::vector<int> k{1};
    std::uint64_t seed = 0;
    /// Draws aim for pole heads of modulus below 1 - sample_delta, which keeps
    /// the trapezoid rule converging fast; feasibility itself uses delta.
    double sample_delta = 0.15;
    double delta = 0.05;
    int max_tries = 20000;
};

struct DrawOutcome {
    bool feasible = false;
    IdentityCase c;           // the accepted draw, or the best rejected one
    FeasibilityReport report; // evaluated with DrawRequest::delta
    int tries = 0;
};

/// Random parameters for one case. Deterministic in the request.
DrawOutcome draw_case(const DrawRequest& req);

/// Range (lo, hi) of |b| keeping every head of integrand_pole_map(mu, b) below radius.
/// (0, inf) for mu = 0; lo >= hi when no b works.
std::pair<double, double> pole_interval(const Bipartition& mu, const SymbolContext& ctx, double radius);

} // namespace ellsel
