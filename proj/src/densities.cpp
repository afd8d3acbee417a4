#include "ellsel/densities.hpp"

#include <cmath>
#include <sstream>

namespace ellsel {

namespace {

void append_location(PoleError& e, const std::string& where) { e = PoleError(std::string(e.what()) + " in " + where); }

} // namespace

Complex kappa_log(int k, const NomePair& nomes)
{
    Complex lp = std::log(qpochhammer_inf(nomes.p, nomes.p, nomes.eps_tail));
    Complex lq = std::log(qpochhammer_inf(nomes.q, nomes.q, nomes.eps_tail));
    return static_cast<double>(k) * (lp + lq - std::log(2.0)) - std::lgamma(k + 1.0);
}

LogProduct dixon_log(std::span<const Complex> z, std::span<const Complex> ts, const NomePair& nomes)
{
    const std::size_t k = z.size();
    LogProduct out;
    out.mul_log(kappa_log(static_cast<int>(k), nomes));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            out.mul(gamma_pm_recip_log(z[i] * z[j], nomes));
            out.mul(gamma_pm_recip_log(z[i] / z[j], nomes));
        }
        for (Complex tr : ts)
            out.mul(gamma_pm(tr, z[i], nomes));
        out.mul(gamma_pm_recip_log(z[i] * z[i], nomes));
    }
    return out;
}

Complex dixon_density(std::span<const Complex> z, std::span<const Complex> ts, const NomePair& nomes)
{
    return dixon_log(z, ts, nomes).value();
}

LogProduct selberg_vertex_log(std::span<const Complex> z, std::span<const Complex> ts, Complex t,
                              const NomePair& nomes)
{
    LogProduct out = dixon_log(z, ts, nomes);
    const std::size_t k = z.size();
    if (k > 0) {
        LogProduct gt = elliptic_gamma_log(t, nomes);
        for (std::size_t i = 0; i < k; ++i)
            out.mul(gt);
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            out.mul(gamma_pmpm(t, z[i], z[j], nomes));
    return out;
}

Complex selberg_vertex_density(std::span<const Complex> z, std::span<const Complex> ts, Complex t,
                               const NomePair& nomes)
{
    return selberg_vertex_log(z, ts, t, nomes).value();
}

LogProduct selberg_edge_log(std::span<const Complex> z, std::span<const Complex> w, Complex c, const NomePair& nomes)
{
    LogProduct out;
    for (Complex zi : z)
        for (Complex wj : w)
            out.mul(gamma_pmpm(c, zi, wj, nomes));
    return out;
}

Complex selberg_edge_density(std::span<const Complex> z, std::span<const Complex> w, Complex c,
                             const NomePair& nomes)
{
    return selberg_edge_log(z, w, c, nomes).value();
}

std::vector<Complex> an_vertex_params(const ParamSet& ps, int r)
{
    const int n = ps.n;
    if (r < 1 || r > n)
        throw DomainError("vertex level out of range");
    if (r == n) {
        std::vector<Complex> out;
        for (int s = 2 * n - 1; s <= 2 * n + 4; ++s)
            out.push_back(ps.tp(s));
        return out;
    }
    Complex down = ipow(ps.c, r - n), up = ps.t * ipow(ps.c, n - r);
    return {down * ps.tp(2 * r - 1), down * ps.tp(2 * r), up / ps.tp(2 * r + 1), up / ps.tp(2 * r + 2)};
}

LogProduct an_density_log(const std::vector<std::vector<Complex>>& levels, const ParamSet& ps)
{
    if (static_cast<int>(levels.size()) != ps.n)
        throw DomainError("an_density: expected one variable list per level");
    const NomePair nm = ps.nomes();
    LogProduct out;
    for (int r = 1; r <= ps.n; ++r) {
        const auto& z = levels[static_cast<std::size_t>(r - 1)];
        if (static_cast<int>(z.size()) != ps.k_at(r))
            throw DomainError("an_density: level " + std::to_string(r) + " has the wrong number of variables");
        try {
            out.mul(selberg_vertex_log(z, an_vertex_params(ps, r), ps.t, nm));
        } catch (PoleError& e) {
            append_location(e, "vertex density at level " + std::to_string(r));
            throw e;
        }
        if (r < ps.n) {
            try {
                out.mul(selberg_edge_log(z, levels[static_cast<std::size_t>(r)], ps.c, nm));
            } catch (PoleError& e) {
                append_location(e, "edge density between levels " + std::to_string(r) + " and " +
                                       std::to_string(r + 1));
                throw e;
            }
        }
    }
    return out;
}

Complex an_density(const std::vector<std::vector<Complex>>& levels, const ParamSet& ps)
{
    return an_density_log(levels, ps).value();
}

Complex selberg_average_normalizer(std::span<const Complex> ts6, Complex t, int k, const NomePair& nomes)
{
    if (ts6.size() != 6)
        throw DomainError("Selberg normaliser needs six parameters");
    Complex prod = ipow(t, 2 * k - 2);
    for (Complex z : ts6)
        prod *= z;
    Complex pq = nomes.p * nomes.q;
    double res = std::abs(prod - pq) / std::abs(pq);
    if (!(res <= 1e-12))
        throw BalancingError("Selberg normaliser: t^(2k-2) t1...t6 = pq violated, relative residual " +
                             std::to_string(res));
    LogProduct out;
    for (int i = 1; i <= k; ++i) {
        out.mul(elliptic_gamma_log(ipow(t, i), nomes));
        for (int r = 0; r < 6; ++r)
            for (int s = r + 1; s < 6; ++s)
                out.mul(elliptic_gamma_log(ipow(t, i - 1) * ts6[r] * ts6[s], nomes));
    }
    return out.value();
}

Complex an_selberg_closed_form(const ParamSet& ps)
{
    const NomePair nm = ps.nomes();
    const int n = ps.n;
    const Complex t = ps.t;
    LogProduct out;
    auto g = [&](Complex z) { out.mul(elliptic_gamma_log(z, nm)); };
    for (int r = 1; r <= n; ++r) {
        const int m = ps.k_at(r) - ps.k_at(r - 1);
        for (int i = 1; i <= m; ++i) {
            g(ipow(t, i));
            g(ipow(t, i - 1) * ipow(ps.c, 2 * r - 2 * n) * ps.tp(2 * r - 1) * ps.tp(2 * r));
            for (int s = r + 1; s <= n; ++s)
                for (int a : {2 * r - 1, 2 * r})
                    for (int b : {2 * s - 1, 2 * s})
                        g(ipow(t, i) * ps.tp(a) / ps.tp(b));
            for (int s = 2 * n + 1; s <= 2 * n + 4; ++s) {
                g(ipow(t, i - 1) * ps.tp(2 * r - 1) * ps.tp(s));
                g(ipow(t, i - 1) * ps.tp(2 * r) * ps.tp(s));
            }
        }
    }
    for (int r = 2 * n + 1; r <= 2 * n + 4; ++r)
        for (int s = r + 1; s <= 2 * n + 4; ++s)
            for (int i = 1; i <= ps.k_at(n); ++i)
                g(ipow(t, i - 1) * ps.tp(r) * ps.tp(s));
    return out.value();
}

int IntegrandDescriptor::total_dimension() const
{
    int s = 0;
    for (int d : dims)
        s += d;
    return s;
}

void IntegrandDescriptor::validate() const
{
    const int levels = static_cast<int>(dims.size());
    for (const auto& f : factors) {
        if (f.level < 0 || f.level > levels || f.other_level < 0 || f.other_level > levels)
            throw DomainError("integrand factor '" + f.label + "' refers to an undeclared level");
    }
}

std::string IntegrandDescriptor::describe() const
{
    std::ostringstream os;
    os << "dims=(";
    for (std::size_t i = 0; i < dims.size(); ++i)
        os << (i ? "," : "") << dims[i];
    os << ")";
    for (const auto& f : factors)
        os << " " << f.label;
    return os.str();
}

IntegrandDescriptor an_descriptor(const ParamSet& ps)
{
    IntegrandDescriptor d;
    d.dims = ps.k;
    for (int r = 1; r <= ps.n; ++r) {
        d.factors.push_back({IntegrandFactor::Kind::vertex, r, 0, "vertex[" + std::to_string(r) + "]"});
        if (r < ps.n)
            d.factors.push_back({IntegrandFactor::Kind::edge, r, r + 1,
                                 "edge[" + std::to_string(r) + "," + std::to_string(r + 1) + "]"});
    }
    d.validate();
    return d;
}

} // namespace ellsel
