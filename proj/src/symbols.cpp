#include "ellsel/symbols.hpp"

namespace ellsel {

namespace {

struct Nomes {
    Complex shift; // q in C(z;q,t;p)
    Complex theta; // p in C(z;q,t;p)
};

Nomes roles(const SymbolContext& ctx, Role role)
{
    return role == Role::Q ? Nomes{ctx.nomes.q, ctx.nomes.p} : Nomes{ctx.nomes.p, ctx.nomes.q};
}

// prod over cells of theta(z shift^{qe(i,j)} t^{te(i,j)})
template <class Exps>
LogProduct cell_product(const Partition& lam, Complex z, const SymbolContext& ctx, Role role, Exps exps)
{
    Nomes nm = roles(ctx, role);
    Partition conj = conjugate(lam);
    LogProduct out;
    for (int i = 1; i <= lam.length(); ++i)
        for (int j = 1; j <= lam[i]; ++j) {
            auto [qe, te] = exps(lam, conj, i, j);
            out.mul(theta_log(z * ipow(nm.shift, qe) * ipow(ctx.t, te), nm.theta, ctx.nomes.eps_tail));
        }
    return out;
}

} // namespace

LogProduct c0_log(const Partition& lam, Complex z, const SymbolContext& ctx, Role role)
{
    return cell_product(lam, z, ctx, role, [](const Partition&, const Partition&, int i, int j) {
        return std::pair{j - 1, 1 - i};
    });
}

LogProduct cplus_log(const Partition& lam, Complex z, const SymbolContext& ctx, Role role)
{
    return cell_product(lam, z, ctx, role, [](const Partition& l, const Partition& c, int i, int j) {
        return std::pair{l[i] + j - 1, 2 - c[j] - i};
    });
}

LogProduct cminus_log(const Partition& lam, Complex z, const SymbolContext& ctx, Role role)
{
    return cell_product(lam, z, ctx, role, [](const Partition& l, const Partition& c, int i, int j) {
        return std::pair{l[i] - j, c[j] - i};
    });
}

Complex c0(const Partition& lam, Complex z, const SymbolContext& ctx, Role role)
{
    return c0_log(lam, z, ctx, role).value();
}

Complex cplus(const Partition& lam, Complex z, const SymbolContext& ctx, Role role)
{
    return cplus_log(lam, z, ctx, role).value();
}

Complex cminus(const Partition& lam, Complex z, const SymbolContext& ctx, Role role)
{
    return cminus_log(lam, z, ctx, role).value();
}

Complex c0(const Bipartition& lam, Complex z, const SymbolContext& ctx)
{
    return c0(lam.first, z, ctx, Role::P) * c0(lam.second, z, ctx, Role::Q);
}

LogProduct cplus_log(const Bipartition& lam, Complex z, const SymbolContext& ctx)
{
    LogProduct r = cplus_log(lam.first, z, ctx, Role::P);
    r.mul(cplus_log(lam.second, z, ctx, Role::Q));
    return r;
}

Complex cplus(const Bipartition& lam, Complex z, const SymbolContext& ctx) { return cplus_log(lam, z, ctx).value(); }

Complex cminus(const Bipartition& lam, Complex z, const SymbolContext& ctx)
{
    return cminus(lam.first, z, ctx, Role::P) * cminus(lam.second, z, ctx, Role::Q);
}

LogProduct delta0_log(const Partition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx,
                      Role role)
{
    LogProduct out;
    if (lam.empty())
        return out;
    Complex pqa = ctx.pq() * a;
    for (Complex b : bs) {
        out.mul(c0_log(lam, b, ctx, role));
        out.div(c0_log(lam, pqa / b, ctx, role));
    }
    return out;
}

LogProduct delta0_log(const Bipartition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx)
{
    LogProduct r = delta0_log(lam.first, a, bs, ctx, Role::P);
    r.mul(delta0_log(lam.second, a, bs, ctx, Role::Q));
    return r;
}

Complex delta0(const Partition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx, Role role)
{
    return delta0_log(lam, a, bs, ctx, role).value();
}

Complex delta0(const Bipartition& lam, Complex a, std::span<const Complex> bs, const SymbolContext& ctx)
{
    return delta0_log(lam, a, bs, ctx).value();
}

Complex delta0(const Bipartition& lam, Complex a, std::initializer_list<Complex> bs, const SymbolContext& ctx)
{
    return delta0(lam, a, std::span<const Complex>(bs.begin(), bs.size()), ctx);
}

std::pair<Complex, Complex> gamma_delta_bridge(const Bipartition& lam, int n, Complex a, Complex b,
                                               const SymbolContext& ctx)
{
    if (lam.length() > n)
        throw DomainError("gamma_delta_bridge: bipartition longer than n");
    const NomePair& nm = ctx.nomes;
    LogProduct lhs;
    int cross = 0;
    for (int i = 1; i <= n; ++i) {
        Complex shift = ipow(nm.p, lam.first[i]) * ipow(nm.q, lam.second[i]);
        Complex ai = a * ipow(ctx.t, 1 - i), bi = b * ipow(ctx.t, i - 1);
        lhs.mul(elliptic_gamma_log(ai * shift, nm));
        lhs.mul(elliptic_gamma_log(bi / shift, nm));
        lhs.div(elliptic_gamma_log(ai, nm));
        lhs.div(elliptic_gamma_log(bi, nm));
        cross += lam.first[i] * lam.second[i];
    }
    Complex args[] = {a};
    Complex rhs = ipow(ctx.pq() / (a * b), cross) * delta0(lam, a / b, args, ctx);
    return {lhs.value(), rhs};
}

} // namespace ellsel
