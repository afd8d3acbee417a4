#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellsel/elliptic.hpp"

namespace ellsel {

/// One non-integral identity at one seed. lhs/rhs are the pair with the
/// largest residual among the evaluations the check makes.
struct AlgebraicCheck {
    std::string name;
    std::string shape; // shape(s) used, "-" when none
    Complex lhs, rhs;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string error; // set when an evaluation threw
};

/// Names of the checks in the order they are run.
const std::vector<std::string>& algebraic_check_names();

/// Every check at one seed; parameters and shapes are drawn from the seed.
std::vector<AlgebraicCheck> algebraic_checks(std::uint64_t seed);

} // namespace ellsel
