#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellsel/densities.hpp"
#include "ellsel/feasibility.hpp"
#include "ellsel/quadrature.hpp"

namespace ellsel {

enum class Family {
    beta_k1,
    selberg_A1,
    vdBult,
    kernel_decomp,
    key_theorem,
    prop_RK,
    an_selberg,
    an_aflt,
    an_kadell,
    an_hua_kadell,
    prop_xselberg_base,
    equal_k_recursion,
    kernel_consistency,
    algebraic_suite,
};

struct FamilyInfo {
    Family family;
    std::string name;
    std::string summary;
    std::vector<std::string> variants; // first entry is the default
};

const std::vector<FamilyInfo>& family_registry();
const FamilyInfo& family_info(Family f);
std::string to_string(Family f);
/// Throws ConfigError for an unknown name.
Family family_from_string(const std::string& name);

/// Shapes carried by a case; unused entries stay empty.
struct Shapes {
    Bipartition lam;
    Bipartition mu;
};

/// "lam;mu", or four '|'-separated components "l1|l2|m1|m2", or a single bipartition "l1|l2".
Shapes parse_shapes(const std::string& text);
std::string to_string(const Shapes& s);

/// One identity to verify.
///
/// Parameter conventions per family (ts lists t_1, t_2, ... in order):
///   beta_k1, selberg_A1, an_*        A_n layout, ts = t_1..t_{2n+4}
///   vdBult                           ts = t_1..t_4, extra x
///   key_theorem                      ts = t_1..t_4, extra c, v1, v2, x
///   prop_RK                          ts = t_1..t_5, extra c, x
///   kernel_decomp                    extra b, c, d, x, y  (c is replaced by (pq/t)^{1/2} in the corollary)
///   prop_xselberg_base               A_n layout with k0, extra d, x
///   equal_k_recursion                A_n layout, n = 2
///   kernel_consistency               extra x1, x2, y1, y2 (factored) or x1, x2, a, c (spectral)
struct IdentityCase {
    std::string id;
    Family family = Family::beta_k1;
    std::string variant;
    ParamSet params;
    Shapes shapes;
    GridSpec grid;          // starting grid; fixed grid when adaptive is false
    bool adaptive = true;
    double tol = 0.0;       // 0: the default for the integral dimension
    std::uint64_t seed = 0;
};

/// A torus integral; dim 0 means f is evaluated once with no variables.
struct IntegralTerm {
    TorusIntegrand f;
    int dim = 0;
};

/// lhs = lhs_factor * int(lhs); rhs = rhs_factor * int(rhs) (or rhs_factor alone).
struct AssembledCase {
    IntegralTerm lhs;
    Complex lhs_factor = 1.0;
    std::optional<IntegralTerm> rhs_integral;
    Complex rhs_factor = 1.0;
    std::vector<PoleCondition> conditions;
    IntegrandDescriptor descriptor;
    std::string note; // extra diagnostics, e.g. flagged printed forms
};

/// Pole heads that must lie inside the unit circle; cheap, no binomial solves.
std::vector<PoleCondition> case_conditions(const IdentityCase& c);

/// Integrand and closed form of a case. Throws ConfigError for malformed
/// parameters or shapes outside the suite caps.
AssembledCase assemble(const IdentityCase& c, int inner_threads = 1);

/// Closed forms used by the A_n families.
Complex aflt_rhs(const ParamSet& ps, const Bipartition& lam, const Bipartition& mu);
Complex kadell_rhs(const ParamSet& ps, const Bipartition& lam);
/// printed_index = true uses t_{n+1} in the first mu factor exactly as printed.
Complex hua_kadell_rhs(const ParamSet& ps, const Bipartition& lam, const Bipartition& mu, bool printed_index = false);
/// Right-hand side of the x-deformed A_n Selberg evaluation (any n, k).
Complex xselberg_rhs(const ParamSet& ps, const Bipartition& mu, std::span<const Complex> x, Complex d);

/// Key-theorem parameters equivalent to an n = 1 x-deformed Selberg case.
ParamSet key_theorem_from_xselberg(const ParamSet& base);
Complex key_theorem_rhs(const ParamSet& ps, const Bipartition& mu);

} // namespace ellsel
