#pragma once

#include <span>
#include <utility>

#include "ellsel/elliptic.hpp"
#include "ellsel/partitions.hpp"

namespace ellsel {

/// Nomes together with the parameter t of the C-symbols.
struct SymbolContext {
    NomePair nomes;
    Complex t;

    Complex pq() const { return nomes.p * nomes.q; }
};

/// Which nome plays the shift role inside the theta products.
///
/// Role::Q gives C(z;q,t;p): shifts by q, theta with nome p.
/// Role::P gives C(z;p,t;q). The first component of a bipartition uses Role::P.
enum class Role { P, Q };

LogProduct c0_log(const Partition& lam, Complex z, const SymbolContext& ctx, Role role);
LogProduct cplus_log(const Partition& lam, Complex z, const SymbolContext& ctx, Role role);
LogProduct cminus_log(const Partition& lam, Complex z, const SymbolContext& ctx, Role role);

Complex c0(const Partition& lam, Complex z, const SymbolContext& ctx, Role role = Role::Q);
Complex cplus(const Partition& lam, Complex z, const SymbolContext& ctx, Role role = Role::Q);
Complex cminus(const Partition& lam, Complex z, const SymbolContext& ctx, Role role = Role::Q);

/// Bipartition lifts: product of the Role::P value on first and Role::Q value on second.
Complex c0(const Bipartition& lam, Complex z, const SymbolContext& ctx);
Complex cplus(const Bipartition& lam, Complex z, const SymbolContext& ctx);
Complex cminus(const Bipartition& lam, Complex z, const SymbolContext& ctx);
LogProduct cplus_log(const Bipartition& lam, Complex z, const SymbolContext& ctx);

/// prod_i C0(b_i) / C0(pq a / b_i).
LogProduct delta0_log(const Partition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx,
                      Role role);
LogProduct delta0_log(const Bipartition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx);

Complex delta0(const Partition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx,
               Role role = Role::Q);
Complex delta0(const Bipartition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx);
Complex delta0(const Bipartition& lam, Complex a, std::initializer_list<Complex> bs, const SymbolContext& ctx);

/// Both sides of the identity relating shifted gamma products to Delta0_lam(a/b | a).
std::pair<Complex, Complex> gamma_delta_bridge(const Bipartition& lam, int n, Complex a, Complex b,
                                               const SymbolContext& ctx);

} // namespace ellsel
