#pragma once

#include <map>
#include <string>
#include <vector>

#include "ellsel/symbols.hpp"

namespace ellsel {

/// Parameters of an A_n Selberg-type integral.
///
/// ts holds t_1..t_{2n+4} (ts[0] is t_1). c is derived from branch_tag:
/// "+" is the principal square root of pq/t, "-" its negative.
/// Families that need further scalars (x, y, b, c, d, v1, ...) keep them in extra.
struct ParamSet {
    int n = 1;
    std::vector<int> k{1};
    int k0 = 0; // k_0 of the modified balancing; 0 for the plain A_n integral
    Complex p, q, t, c;
    std::vector<Complex> ts;
    std::string branch_tag = "+";
    std::map<std::string, Complex> extra;

    NomePair nomes() const { return {p, q}; }
    SymbolContext ctx() const { return {{p, q}, t}; }
    Complex pq() const { return p * q; }

    /// t_i with the 1-based index used in formulas.
    Complex tp(int i) const;
    int k_at(int r) const { return r == 0 ? k0 : k.at(static_cast<std::size_t>(r - 1)); }
    int total_dimension() const;
    Complex extra_at(const std::string& key) const;

    /// Recompute c from p, q, t and branch_tag.
    void set_c();

    /// Relative residual of t^{k_r-k_{r-1}+k_n-2} t_{2r-1} t_{2r} t_{2n+1}..t_{2n+4} = pq.
    double balancing_residual(int r) const;

    /// Structure, nome and c checks. Throws DomainError.
    void validate_basic() const;
    /// validate_basic plus every balancing condition to 1e-13. Throws BalancingError.
    void validate_balanced() const;

    /// Solve t_{2r} from the r-th balancing condition.
    void solve_partner(int r);
};

/// JSON with complex numbers as [re, im]; fields n, k, k0, p, q, t, ts, branch_tag, extra.
std::string to_json(const ParamSet& ps, int indent = -1);
ParamSet params_from_json(const std::string& text);

} // namespace ellsel
