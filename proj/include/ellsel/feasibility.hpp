#pragma once

#include <string>
#include <vector>

#include "ellsel/interpolation.hpp"
#include "ellsel/params.hpp"

namespace ellsel {

/// A point (the largest member of a pole sequence tending to zero) that must
/// lie inside the unit circle for the torus to be an admissible contour.
/// Its reciprocal, the head of the mirrored sequence, must lie outside.
struct PoleCondition {
    std::string what;
    Complex head;
};

struct FeasibilityReport {
    bool feasible = true;
    double log_margin = 0.0; // min over conditions of -log|head|
    double delta = 0.05;
    std::vector<std::string> violations;

    std::string summary() const;
};

/// Conditions for the unit torus at every level of the A_n density.
std::vector<PoleCondition> an_contour_conditions(const ParamSet& ps);

/// Violations of k_{r+1} - 2 k_r + k_{r-1} >= -1 for 1 <= r <= n-1, a
/// necessary condition for unit-circle contours at every level.
std::vector<std::string> k_profile_violations(const ParamSet& ps);

/// Heads of the interpolation-factor pole sequences at a given level.
std::vector<PoleCondition> interpolation_conditions(const PoleMap& poles, const std::string& source);

/// feasible iff every head has modulus < 1 - delta (its reciprocal is then > 1 + delta).
FeasibilityReport evaluate_conditions(const std::vector<PoleCondition>& conds, double delta = 0.05);

FeasibilityReport feasibility_check(const ParamSet& ps, const std::vector<PoleCondition>& extra = {},
                                    double delta = 0.05);

} // namespace ellsel
