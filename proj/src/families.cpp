#include "ellsel/families.hpp"

#include <algorithm>
#include <sstream>

#include "ellsel/kernel.hpp"

namespace ellsel {

namespace {

using Levels = std::vector<std::vector<Complex>>;
using Kind = IntegrandFactor::Kind;

constexpr int kMaxShapeSize = 4;
constexpr int kMaxDimension = 3;
constexpr double kConstraintTol = 1e-12;

void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw ConfigError(msg);
}

void check_constraint(Complex lhs, Complex rhs, const std::string& what)
{
    double r = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    if (!(r <= kConstraintTol)) {
        std::ostringstream os;
        os << what << " violated, relative residual " << r;
        throw BalancingError(os.str());
    }
}

Levels split(std::span<const Complex> z, const std::vector<int>& dims)
{
    Levels out;
    std::size_t at = 0;
    for (int d : dims) {
        out.emplace_back(z.begin() + static_cast<long>(at), z.begin() + static_cast<long>(at + d));
        at += static_cast<std::size_t>(d);
    }
    return out;
}

void append(std::vector<PoleCondition>& out, const std::vector<PoleCondition>& more)
{
    out.insert(out.end(), more.begin(), more.end());
}

void add_pm(std::vector<PoleCondition>& out, const std::string& name, const std::string& var, Complex a, Complex x)
{
    out.push_back({name + " " + var, a * x});
    out.push_back({name + " / " + var, a / x});
}

void add_params(std::vector<PoleCondition>& out, const std::vector<Complex>& ts, const std::vector<std::string>& names)
{
    for (std::size_t i = 0; i < ts.size(); ++i)
        out.push_back({names[i], ts[i]});
}

// With one variable the numerator of R*_mu(x; a, b) cancels the Gamma(a x^+-)
// poles down to the head a p^m1 q^m2.
void relax_numerator(std::vector<PoleCondition>& out, Complex a, const Bipartition& mu, int vars,
                     const SymbolContext& ctx)
{
    if (vars != 1 || mu.empty())
        return;
    for (auto& cond : out)
        if (std::abs(cond.head - a) <= 1e-12 * std::abs(a)) {
            cond.head = a * ipow(ctx.nomes.p, mu.first[1]) * ipow(ctx.nomes.q, mu.second[1]);
            cond.what += " after the R* numerator";
            return;
        }
}

bool ends_with(const std::string& s, const std::string& tail)
{
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

// Level-1 conditions of t_1, t_2 belong to factors divided out of the density.
std::vector<PoleCondition> without_level1_t12(std::vector<PoleCondition> conds)
{
    std::erase_if(conds, [](const PoleCondition& c) {
        return c.what.rfind("level 1: ", 0) == 0 && (ends_with(c.what, " t_1") || ends_with(c.what, " t_2"));
    });
    return conds;
}

std::vector<std::string> tnames(int from, int to)
{
    std::vector<std::string> out;
    for (int i = from; i <= to; ++i)
        out.push_back("t_" + std::to_string(i));
    return out;
}


void check_shapes(const IdentityCase& c)
{
    require(c.shapes.lam.size() + c.shapes.mu.size() <= kMaxShapeSize,
            "shapes exceed the cap |lam| + |mu| <= " + std::to_string(kMaxShapeSize));
}

void check_dimension(int dim)
{
    require(dim >= 1 && dim <= kMaxDimension, "integral dimension " + std::to_string(dim) + " outside 1..3");
}

// ---- A_n Selberg and averages --------------------------------------------

AssembledCase assemble_selberg(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    ps.validate_balanced();
    if (c.family == Family::beta_k1)
        require(ps.n == 1 && ps.k == std::vector<int>{1}, "beta_k1 needs n = 1, k = 1");
    if (c.family == Family::selberg_A1)
        require(ps.n == 1, "selberg_A1 needs n = 1");
    require(ps.k0 == 0, "the A_n Selberg integral has k0 = 0");
    check_dimension(ps.total_dimension());

    AssembledCase out;
    const ParamSet p = ps;
    out.lhs = {[p](std::span<const Complex> z) { return an_density(split(z, p.k), p); }, ps.total_dimension()};
    out.rhs_factor = an_selberg_closed_form(ps);
    out.descriptor = an_descriptor(ps);
    return out;
}

Complex lambda_part(const ParamSet& ps, const Bipartition& lam)
{
    const SymbolContext ctx = ps.ctx();
    const Complex t = ps.t;
    const int k1 = ps.k_at(1), n = ps.n;
    const Complex a = ipow(t, k1 - 1) * ps.tp(1) / ps.tp(2);
    LogProduct v;
    std::vector<Complex> bs;
    for (int r = 3; r <= 2 * n; ++r)
        bs.push_back(ipow(t, k1) * ps.tp(1) / ps.tp(r));
    for (int r = 2 * n + 1; r <= 2 * n + 4; ++r)
        bs.push_back(ipow(t, k1 - 1) * ps.tp(1) * ps.tp(r));
    v.mul(delta0_log(lam, a, bs, ctx));
    return v.value();
}

std::vector<Complex> scaled(const std::vector<Complex>& v, Complex s)
{
    std::vector<Complex> out;
    for (Complex z : v)
        out.push_back(s * z);
    return out;
}

// mu factors shared by the AFLT, Hua-Kadell and x-deformed evaluations. The
// lambda-dependent ratio is left out when lam is null.
Complex mu_part(const ParamSet& ps, const Bipartition* lam, const Bipartition& mu, Complex tau, Complex first_a)
{
    const SymbolContext ctx = ps.ctx();
    const Complex t = ps.t;
    const int n = ps.n, kn = ps.k_at(n), k1 = ps.k_at(1);
    const Complex a = ipow(t, kn) * tau / ps.tp(2 * n + 4);
    LogProduct v;
    std::vector<Complex> first;
    for (int r = 2 * n + 2; r <= 2 * n + 3; ++r)
        first.push_back(ipow(t, kn - 1) * ps.tp(2 * n + 1) * ps.tp(r));
    v.mul(delta0_log(mu, first_a, first, ctx));
    for (int r = 2; r <= n; ++r) {
        Complex num = ipow(t, kn) * ps.tp(2 * r - 1) * tau;
        Complex den = ipow(t, kn + ps.k_at(r) - ps.k_at(r - 1)) * ps.tp(2 * r - 1) * tau;
        v.mul(delta0_log(mu, a, std::vector<Complex>{num}, ctx));
        v.div(delta0_log(mu, a, std::vector<Complex>{den}, ctx));
    }
    if (lam) {
        const auto spec = spectral_vector(*lam, k1, t, ps.p, ps.q);
        v.mul(delta0_log(mu, a, scaled(spec, ipow(t, kn) * ps.tp(1) * tau), ctx));
        v.div(delta0_log(mu, a, scaled(spec, ipow(t, kn + 1) * ps.tp(1) * tau), ctx));
    }
    return v.value();
}

Complex tau_n(const ParamSet& ps)
{
    const int n = ps.n;
    return ps.tp(2 * n + 1) * ps.tp(2 * n + 2) * ps.tp(2 * n + 3) / (ps.t * ps.t);
}

AssembledCase assemble_average(const IdentityCase& c, int)
{
    const ParamSet& ps = c.params;
    ps.validate_balanced();
    require(ps.k0 == 0, "A_n averages have k0 = 0");
    const int n = ps.n, k1 = ps.k_at(1), kn = ps.k_at(n);
    require(k1 <= 2, "k_1 is capped at 2");
    check_dimension(ps.total_dimension());
    const Bipartition& lam = c.shapes.lam;
    const Bipartition& mu = c.shapes.mu;
    require(lam.length() <= k1, "lambda has more rows than k_1");
    if (c.family == Family::an_kadell)
        require(mu.empty(), "the Kadell average has no mu");
    if (c.family == Family::an_hua_kadell)
        require(mu.length() <= kn, "mu has more rows than k_n");

    const SymbolContext ctx = ps.ctx();
    const Complex t = ps.t, cn = ipow(ps.c, 1 - n);
    const Complex tau = tau_n(ps);
    BinomialCache cache(c.seed);

    auto rl = std::make_shared<InterpEvaluator>(
        InterpEvaluator::nonskew(lam, k1, cn * ps.tp(1), cn * ps.tp(2), ctx, cache));
    std::shared_ptr<InterpEvaluator> rm;
    Complex mu_b = ps.tp(2 * n + 4);
    if (c.family == Family::an_hua_kadell) {
        check_constraint(ps.tp(2 * n + 2) * ps.tp(2 * n + 3), t, "t_{2n+2} t_{2n+3} = t");
        rm = std::make_shared<InterpEvaluator>(
            InterpEvaluator::nonskew(mu, kn, ps.tp(2 * n + 1), mu_b, ctx, cache));
    } else if (!mu.empty()) {
        rm = std::make_shared<InterpEvaluator>(InterpEvaluator::hybrid(
            mu, kn, {ps.tp(2 * n + 2) / t, ps.tp(2 * n + 3) / t}, t * tau, mu_b, ctx, cache));
    }

    AssembledCase out;
    const ParamSet p = ps;
    out.lhs = {[p, rl, rm](std::span<const Complex> z) {
                   Levels lv = split(z, p.k);
                   Complex v = (*rl)(lv.front());
                   if (rm)
                       v *= (*rm)(lv.back());
                   return v * an_density(lv, p);
               },
               ps.total_dimension()};
    out.lhs_factor = 1.0 / an_selberg_closed_form(ps);
    switch (c.family) {
    case Family::an_kadell:
        out.rhs_factor = kadell_rhs(ps, lam);
        break;
    case Family::an_hua_kadell: {
        out.rhs_factor = hua_kadell_rhs(ps, lam, mu);
        Complex printed = hua_kadell_rhs(ps, lam, mu, true);
        std::ostringstream os;
        os << "printed t_{n+1} index differs from the t_{2n+1} form by relative "
           << std::abs(printed - out.rhs_factor) / std::max(std::abs(out.rhs_factor), 1e-300);
        out.note = os.str();
        break;
    }
    default:
        out.rhs_factor = aflt_rhs(ps, lam, mu);
    }

    out.descriptor = an_descriptor(ps);
    out.descriptor.factors.push_back({Kind::interpolation, 1, 0, "R*_lambda"});
    if (rm)
        out.descriptor.factors.push_back({Kind::interpolation, n, 0, "R*_mu"});
    return out;
}

// ---- one-dimensional families -------------------------------------------

AssembledCase assemble_vdbult(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    require(ps.k == std::vector<int>{1}, "vdBult is implemented for k = 1");
    require(ps.ts.size() == 4, "vdBult needs t_1..t_4");
    ps.nomes().validate();
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex t = ps.t, cc = ps.c, x = ps.extra_at("x");
    const std::vector<Complex>& T = ps.ts;
    check_constraint(T[0] * T[1] * T[2] * T[3], t, "t_1 t_2 t_3 t_4 = t");
    const Bipartition& mu = c.shapes.mu;
    require(mu.length() <= 1, "mu has more rows than k");
    BinomialCache cache(c.seed);

    auto rm = std::make_shared<InterpEvaluator>(InterpEvaluator::nonskew(mu, 1, T[0], T[1], ctx, cache));
    const std::vector<Complex> vp{T[0], T[1], T[2], T[3], cc * x, cc / x};
    AssembledCase out;
    out.lhs = {[rm, vp, t, nm](std::span<const Complex> z) {
                   return (*rm)(z) * selberg_vertex_density(z, vp, t, nm);
               },
               1};

    LogProduct r;
    std::vector<Complex> xs{x};
    r.mul(InterpEvaluator::nonskew(mu, 1, cc * T[0], cc * T[1], ctx, cache)(xs));
    r.mul(delta0_log(mu, T[0] / T[1], std::vector<Complex>{T[0] * T[2], T[0] * T[3]}, ctx));
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j)
            r.mul(elliptic_gamma_log(T[i] * T[j], nm));
        r.mul(gamma_pm(cc * T[i], x, nm));
    }
    out.rhs_factor = r.value();

    out.descriptor.dims = {1};
    out.descriptor.factors = {{Kind::vertex, 1, 0, "vertex(t_1..t_4, c x^+-)"}, {Kind::interpolation, 1, 0, "R*_mu"}};
    return out;
}

AssembledCase assemble_key_theorem(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    require(ps.k == std::vector<int>{1}, "key_theorem is implemented for k = 1");
    require(ps.ts.size() == 4, "key_theorem needs t_1..t_4");
    ps.nomes().validate();
    const SymbolContext ctx = ps.ctx();
    const Complex t = ps.t, cc = ps.extra_at("c"), v1 = ps.extra_at("v1"), v2 = ps.extra_at("v2"),
                  x = ps.extra_at("x");
    const std::vector<Complex>& T = ps.ts;
    check_constraint(T[3], t * v1, "t_4 = t v1");
    check_constraint(cc * cc * T[0] * T[1] * T[2] * T[3], ps.pq(), "c^2 t_1 t_2 t_3 t_4 = pq");
    const Bipartition& mu = c.shapes.mu;
    BinomialCache cache(c.seed);

    auto rm = std::make_shared<InterpEvaluator>(
        InterpEvaluator::hybrid(mu, 1, {v1, v2}, t * T[0] * v1 * v2, T[1], ctx, cache));
    AssembledCase out;
    out.lhs = {[rm, T, x, cc, ctx](std::span<const Complex> z) {
                   return kernel_k1(cc, x, z[0], ctx) * (*rm)(z) * selberg_vertex_density(z, T, ctx.t, ctx.nomes);
               },
               1};
    out.rhs_factor = key_theorem_rhs(ps, mu);

    out.descriptor.dims = {1};
    out.descriptor.factors = {{Kind::kernel, 1, 0, "K_c(x; z)"},
                              {Kind::interpolation, 1, 0, "hybrid R*_mu"},
                              {Kind::vertex, 1, 0, "vertex(t_1..t_4)"}};
    return out;
}

AssembledCase assemble_prop_rk(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    require(ps.k == std::vector<int>{1}, "prop_RK is implemented for k = 1");
    require(ps.ts.size() == 5, "prop_RK needs t_1..t_5");
    ps.nomes().validate();
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex cc = ps.extra_at("c"), x = ps.extra_at("x");
    const std::vector<Complex>& T = ps.ts;
    check_constraint(cc * cc * T[1] * T[2] * T[3] * T[4], ps.pq(), "c^2 t_2 t_3 t_4 t_5 = pq");
    const Bipartition& mu = c.shapes.mu;
    require(mu.length() <= 1, "mu has more rows than k");
    BinomialCache cache(c.seed);

    auto rm = std::make_shared<InterpEvaluator>(InterpEvaluator::nonskew(mu, 1, T[0], T[1], ctx, cache));
    const std::vector<Complex> vp{T[1], T[2], T[3], T[4]};
    AssembledCase out;
    out.lhs = {[rm, vp, x, cc, ctx](std::span<const Complex> z) {
                   return kernel_k1(cc, x, z[0], ctx) * (*rm)(z) * selberg_vertex_density(z, vp, ctx.t, ctx.nomes);
               },
               1};

    LogProduct pre;
    for (int i = 1; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j)
            pre.mul(elliptic_gamma_log(T[i] * T[j], nm));
        pre.mul(gamma_pm(cc * T[i], x, nm));
    }
    Complex sum = 0.0;
    std::vector<Complex> xs{x};
    for (const Bipartition& nu : sub_bipartitions(mu)) {
        BinomialQuery q{mu, nu, T[0] / T[1], cc * cc, ctx, {T[0] * T[2], T[0] * T[3], T[0] * T[4]}};
        sum += binomial(q, cache) * InterpEvaluator::nonskew(nu, 1, T[0] / cc, cc * T[1], ctx, cache)(xs);
    }
    out.rhs_factor = pre.value() * sum;

    out.descriptor.dims = {1};
    out.descriptor.factors = {{Kind::kernel, 1, 0, "K_c(x; z)"},
                              {Kind::interpolation, 1, 0, "R*_mu(t_1, t_2)"},
                              {Kind::vertex, 1, 0, "vertex(t_2..t_5)"}};
    return out;
}

AssembledCase assemble_kernel_decomp(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    require(ps.k == std::vector<int>{1}, "kernel_decomp is implemented for k = l = 1");
    ps.nomes().validate();
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex t = ps.t, pq = ps.pq();
    const Complex b = ps.extra_at("b"), d = ps.extra_at("d"), x = ps.extra_at("x"), y = ps.extra_at("y");
    const bool corollary = c.variant == "corollary";
    AssembledCase out;
    out.descriptor.dims = {1};

    if (!corollary) {
        const Complex cc = ps.extra_at("c");
        const std::vector<Complex> vp{b, pq / (b * cc * cc * d * d)};
        out.lhs = {[vp, x, y, cc, d, ctx](std::span<const Complex> z) {
                       return kernel_k1(cc, x, z[0], ctx) * kernel_k1(d, z[0], y, ctx) *
                              selberg_vertex_density(z, vp, ctx.t, ctx.nomes);
                   },
                   1};
        LogProduct r;
        r.mul(kernel_k1(cc * d, x, y, ctx));
        r.mul(gamma_pm(b * cc, x, nm));
        r.div(gamma_pm(b * cc * d * d, x, nm));
        r.mul(gamma_pm(b * d, y, nm));
        r.div(gamma_pm(b * cc * cc * d, y, nm));
        out.rhs_factor = r.value();
        out.descriptor.factors = {{Kind::kernel, 1, 0, "K_c(x; z)"},
                                  {Kind::kernel, 1, 0, "K_d(z; y)"},
                                  {Kind::vertex, 1, 0, "vertex(b, pq/(b c^2 d^2))"}};
    } else {
        const Complex cc = ps.c;
        const std::vector<Complex> vp{b, t / (b * d * d)};
        out.lhs = {[vp, x, y, cc, d, ctx](std::span<const Complex> z) {
                       LogProduct v = gamma_pmpm(cc, z[0], x, ctx.nomes);
                       v.mul(selberg_vertex_log(z, vp, ctx.t, ctx.nomes));
                       return kernel_k1(d, z[0], y, ctx) * v.value();
                   },
                   1};
        LogProduct r;
        r.mul(kernel_k1(cc * d, x, y, ctx));
        r.mul(gamma_pm(b * d, y, nm));
        r.mul(gamma_pm(t / (b * d), y, nm));
        r.div(gamma_pm(b * cc * d * d, x, nm));
        r.div(gamma_pm(cc * t / b, x, nm));
        out.rhs_factor = r.value();
        out.descriptor.factors = {{Kind::kernel, 1, 0, "K_d(z; y)"},
                                  {Kind::edge, 1, 0, "Gamma(c z^+- x^+-)"},
                                  {Kind::vertex, 1, 0, "vertex(b, t/(b d^2))"}};
    }
    return out;
}

// ---- x-deformed Selberg and equal-k recursion --------------------------

AssembledCase assemble_xselberg(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    ps.validate_balanced();
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex t = ps.t, d = ps.extra_at("d"), x = ps.extra_at("x");
    const int n = ps.n;
    require(ps.k_at(1) == 1, "the x-deformed Selberg cases use k_1 = 1");
    check_constraint(d * d, ipow(ps.c, 2 - 2 * n) * ipow(t, ps.k_at(1) - ps.k0 - 1) * ps.tp(1) * ps.tp(2),
                     "d^2 = c^(2-2n) t^(k_1-k_0-1) t_1 t_2");
    const Bipartition& mu = c.shapes.mu;
    require(mu.length() <= ps.k_at(n), "mu has more rows than k_n");
    const bool step = c.variant == "step";
    if (step)
        require(n == 2 && ps.k == std::vector<int>({1, 1}), "the step variant is implemented for n = 2, k = (1,1)");
    else
        require(n == 1, "the base variant has n = 1");
    BinomialCache cache(c.seed);

    const Complex tau = tau_n(ps), mb = ps.tp(2 * n + 4);
    auto rm = std::make_shared<InterpEvaluator>(InterpEvaluator::hybrid(
        mu, ps.k_at(n), {ps.tp(2 * n + 2) / t, ps.tp(2 * n + 3) / t}, t * tau, mb, ctx, cache));
    const std::vector<Complex> top = an_vertex_params(ps, n);
    const std::vector<Complex> top4(top.begin() + 2, top.end());
    std::vector<Complex> xs{x};

    AssembledCase out;

    if (!step) {
        out.lhs = {[rm, top4, x, d, ctx](std::span<const Complex> z) {
                       return kernel_k1(d, z[0], x, ctx) * (*rm)(z) *
                              selberg_vertex_density(z, top4, ctx.t, ctx.nomes);
                   },
                   1};
        out.rhs_factor = xselberg_rhs(ps, mu, xs, d);
        out.descriptor.dims = {1};
        out.descriptor.factors = {{Kind::kernel, 1, 0, "K_d(z; x)"},
                                  {Kind::interpolation, 1, 0, "hybrid R*_mu"},
                                  {Kind::vertex, 1, 0, "vertex(t_3..t_6)"}};
        return out;
    }

    // n = 2: integrate level 1 out against the kernel, leaving an n = 1 case with d -> c d.
    const Complex cc = ps.c;
    const std::vector<Complex> low{cc * t / ps.tp(3), cc * t / ps.tp(4)};
    out.lhs = {[rm, low, top, x, d, cc, ctx](std::span<const Complex> z) {
                   std::span<const Complex> z1 = z.subspan(0, 1), z2 = z.subspan(1, 1);
                   LogProduct v = selberg_vertex_log(z1, low, ctx.t, ctx.nomes);
                   v.mul(selberg_edge_log(z1, z2, cc, ctx.nomes));
                   v.mul(selberg_vertex_log(z2, top, ctx.t, ctx.nomes));
                   return kernel_k1(d, z[0], x, ctx) * (*rm)(z2) * v.value();
               },
               2};

    const Complex dd = cc * d;
    std::vector<Complex> top4b(top.begin() + 2, top.end());
    out.rhs_integral = IntegralTerm{[rm, top4b, x, dd, ctx](std::span<const Complex> z) {
                                        return kernel_k1(dd, z[0], x, ctx) * (*rm)(z) *
                                               selberg_vertex_density(z, top4b, ctx.t, ctx.nomes);
                                    },
                                    1};
    LogProduct r;
    r.mul(gamma_pm(dd * t / ps.tp(3), x, nm));
    r.mul(gamma_pm(dd * t / ps.tp(4), x, nm));
    out.rhs_factor = r.value();
    out.descriptor.dims = {1, 1};
    out.descriptor.factors = {{Kind::kernel, 1, 0, "K_d(z_1; x)"},
                              {Kind::vertex, 1, 0, "vertex(c t/t_3, c t/t_4)"},
                              {Kind::edge, 1, 2, "edge[1,2]"},
                              {Kind::vertex, 2, 0, "vertex[2]"},
                              {Kind::interpolation, 2, 0, "hybrid R*_mu"}};
    return out;
}

AssembledCase assemble_equal_k(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    ps.validate_balanced();
    require(ps.n == 2 && ps.k == std::vector<int>({1, 1}) && ps.k0 == 0,
            "equal_k_recursion is implemented for n = 2, k = (1,1)");
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex t = ps.t, cc = ps.c;
    const Bipartition& lam = c.shapes.lam;
    const Bipartition& mu = c.shapes.mu;
    require(lam.length() <= 1 && mu.length() <= 1, "shapes have more rows than k");
    BinomialCache cache(c.seed);

    const Complex tau = tau_n(ps), mb = ps.tp(8);
    auto rl2 = std::make_shared<InterpEvaluator>(
        InterpEvaluator::nonskew(lam, 1, ps.tp(1) / cc, ps.tp(2) / cc, ctx, cache));
    auto rl1 = std::make_shared<InterpEvaluator>(InterpEvaluator::nonskew(lam, 1, ps.tp(1), ps.tp(2), ctx, cache));
    auto rm = std::make_shared<InterpEvaluator>(
        InterpEvaluator::hybrid(mu, 1, {ps.tp(6) / t, ps.tp(7) / t}, t * tau, mb, ctx, cache));

    AssembledCase out;
    const ParamSet p = ps;
    out.lhs = {[p, rl2, rm](std::span<const Complex> z) {
                   Levels lv = split(z, p.k);
                   return (*rl2)(lv[0]) * (*rm)(lv[1]) * an_density(lv, p);
               },
               2};
    const std::vector<Complex> vp{ps.tp(1), ps.tp(2), ps.tp(5), ps.tp(6), ps.tp(7), ps.tp(8)};
    out.rhs_integral = IntegralTerm{[rl1, rm, vp, ctx](std::span<const Complex> z) {
                                        return (*rl1)(z) * (*rm)(z) * selberg_vertex_density(z, vp, ctx.t, ctx.nomes);
                                    },
                                    1};
    LogProduct r;
    r.mul(elliptic_gamma_log(ps.tp(1) * ps.tp(2) / (cc * cc), nm));
    r.div(elliptic_gamma_log(ps.tp(1) * ps.tp(2), nm));
    for (int i = 1; i <= 2; ++i)
        for (int j = 3; j <= 4; ++j)
            r.mul(elliptic_gamma_log(t * ps.tp(i) / ps.tp(j), nm));
    r.mul(delta0_log(lam, ps.tp(1) / ps.tp(2), std::vector<Complex>{t * ps.tp(1) / ps.tp(3), t * ps.tp(1) / ps.tp(4)},
                     ctx));
    out.rhs_factor = r.value();

    out.descriptor = an_descriptor(ps);
    out.descriptor.factors.push_back({Kind::interpolation, 1, 0, "R*_lambda"});
    out.descriptor.factors.push_back({Kind::interpolation, 2, 0, "hybrid R*_mu"});
    return out;
}

// ---- kernel consistency --------------------------------------------------

KernelSpec consistency_spec(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    KernelSpec spec;
    spec.x = {ps.extra_at("x1"), ps.extra_at("x2")};
    spec.ctx = ps.ctx();
    if (c.variant == "spectral") {
        const Complex a = ps.extra_at("a");
        spec.c = ps.extra_at("c");
        const auto sv = spectral_vector(c.shapes.lam, 2, ps.t, ps.p, ps.q);
        spec.y = {a * sv[0] / spec.c, a * sv[1] / spec.c};
    } else {
        spec.c = ps.c;
        spec.y = {ps.extra_at("y1"), ps.extra_at("y2")};
    }
    return spec;
}

AssembledCase assemble_kernel_consistency(const IdentityCase& c, int inner_threads)
{
    const ParamSet& ps = c.params;
    ps.nomes().validate();
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex t = ps.t;
    const KernelSpec spec = consistency_spec(c);
    AssembledCase out;
    out.descriptor.factors = {{Kind::kernel, 0, 0, "K_c(x; y), k = 2"}};

    if (c.variant == "spectral") {
        const Bipartition& lam = c.shapes.lam;
        require(lam.length() <= 2, "lambda has more rows than 2");
        const Complex a = ps.extra_at("a");
        const Complex b = spec.c * spec.c / (t * a);
        BinomialCache cache(c.seed);
        LogProduct r;
        r.mul(InterpEvaluator::nonskew(lam, 2, a, b, ctx, cache)(spec.x));
        for (int i = 1; i <= 2; ++i) {
            const Complex xi = spec.x[static_cast<std::size_t>(i - 1)];
            r.mul(gamma_pm(a, xi, nm));
            r.mul(gamma_pm(b, xi, nm));
            r.div(elliptic_gamma_log(ipow(t, i), nm));
            r.div(elliptic_gamma_log(ipow(t, i - 1) * a * b, nm));
        }
        // (pq/ab)^{2 lam1_i lam2_i}
        int mixed = 0;
        for (int i = 1; i <= 2; ++i)
            mixed += 2 * lam.first[i] * lam.second[i];
        r.mul(ipow(ps.pq() / (a * b), mixed));
        out.rhs_factor = r.value();
    } else {
        out.rhs_factor = kernel_factored(spec.x, spec.y, ctx);
    }
    out.lhs = {[spec, inner_threads](std::span<const Complex>) { return kernel_k2(spec, inner_threads).value; }, 0};
    return out;
}

AssembledCase assemble_dispatch(const IdentityCase& c, int inner_threads)
{
    switch (c.family) {
    case Family::beta_k1:
    case Family::selberg_A1:
    case Family::an_selberg:
        return assemble_selberg(c);
    case Family::an_aflt:
    case Family::an_kadell:
    case Family::an_hua_kadell:
        return assemble_average(c, inner_threads);
    case Family::vdBult:
        return assemble_vdbult(c);
    case Family::key_theorem:
        return assemble_key_theorem(c);
    case Family::prop_RK:
        return assemble_prop_rk(c);
    case Family::kernel_decomp:
        return assemble_kernel_decomp(c);
    case Family::prop_xselberg_base:
        return assemble_xselberg(c);
    case Family::equal_k_recursion:
        return assemble_equal_k(c);
    case Family::kernel_consistency:
        return assemble_kernel_consistency(c, inner_threads);
    case Family::algebraic_suite:
        break;
    }
    throw ConfigError("family " + to_string(c.family) + " has no integral form");
}


} // namespace

// ---- registry -------------------------------------------------------------

const std::vector<FamilyInfo>& family_registry()
{
    static const std::vector<FamilyInfo> reg{
        {Family::beta_k1, "beta_k1", "elliptic beta integral", {"default"}},
        {Family::selberg_A1, "selberg_A1", "elliptic Selberg integral, n = 1", {"default"}},
        {Family::vdBult, "vdBult", "interpolation function against the factored kernel", {"default"}},
        {Family::kernel_decomp, "kernel_decomp", "composition of two kernels", {"theorem", "corollary"}},
        {Family::key_theorem, "key_theorem", "kernel against a hybrid interpolation function", {"default"}},
        {Family::prop_RK, "prop_RK", "kernel against an interpolation function, binomial expansion", {"default"}},
        {Family::an_selberg, "an_selberg", "elliptic A_n Selberg integral", {"default"}},
        {Family::an_aflt, "an_aflt", "elliptic A_n AFLT average", {"default"}},
        {Family::an_kadell, "an_kadell", "elliptic A_n Kadell average", {"default"}},
        {Family::an_hua_kadell, "an_hua_kadell", "elliptic A_n Hua-Kadell average", {"default"}},
        {Family::prop_xselberg_base, "prop_xselberg_base", "x-deformed A_n Selberg integral", {"base", "step"}},
        {Family::equal_k_recursion, "equal_k_recursion", "reduction of the rank at equal k", {"default"}},
        {Family::kernel_consistency, "kernel_consistency", "k = 2 kernel against closed forms",
         {"factored", "spectral"}},
        {Family::algebraic_suite, "algebraic_suite", "pointwise identities of the special functions", {"default"}},
    };
    return reg;
}

const FamilyInfo& family_info(Family f)
{
    for (const auto& info : family_registry())
        if (info.family == f)
            return info;
    throw ConfigError("unregistered family");
}

std::string to_string(Family f) { return family_info(f).name; }

Family family_from_string(const std::string& name)
{
    for (const auto& info : family_registry())
        if (info.name == name)
            return info.family;
    throw ConfigError("unknown family \"" + name + "\"");
}

Shapes parse_shapes(const std::string& text)
{
    Shapes s;
    try {
        if (auto semi = text.find(';'); semi != std::string::npos) {
            s.lam = parse_bipartition(text.substr(0, semi));
            s.mu = parse_bipartition(text.substr(semi + 1));
            return s;
        }
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, '|');)
            parts.push_back(item);
        if (parts.size() == 4) {
            s.lam = parse_bipartition(parts[0] + "|" + parts[1]);
            s.mu = parse_bipartition(parts[2] + "|" + parts[3]);
        } else if (parts.size() <= 2) {
            s.lam = text.empty() ? Bipartition{} : parse_bipartition(text);
        } else {
            throw ConfigError("");
        }
    } catch (const std::exception&) {
        throw ConfigError("cannot parse shapes \"" + text + "\"; use \"lam;mu\" or \"l1|l2|m1|m2\"");
    }
    return s;
}

std::string to_string(const Shapes& s) { return to_string(s.lam) + ";" + to_string(s.mu); }

// ---- closed forms ---------------------------------------------------------

Complex kadell_rhs(const ParamSet& ps, const Bipartition& lam) { return lambda_part(ps, lam); }

Complex aflt_rhs(const ParamSet& ps, const Bipartition& lam, const Bipartition& mu)
{
    const int n = ps.n, kn = ps.k_at(n);
    const Complex tau = tau_n(ps);
    const Complex a = ipow(ps.t, kn) * tau / ps.tp(2 * n + 4);
    return lambda_part(ps, lam) * mu_part(ps, &lam, mu, tau, a);
}

Complex hua_kadell_rhs(const ParamSet& ps, const Bipartition& lam, const Bipartition& mu, bool printed_index)
{
    const int n = ps.n, kn = ps.k_at(n);
    // t tau_n = t_{2n+1} under t_{2n+2} t_{2n+3} = t
    const Complex tau = ps.tp(2 * n + 1) / ps.t;
    const Complex first_a = ipow(ps.t, kn - 1) * ps.tp(printed_index ? n + 1 : 2 * n + 1) / ps.tp(2 * n + 4);
    return lambda_part(ps, lam) * mu_part(ps, &lam, mu, tau, first_a);
}

Complex xselberg_rhs(const ParamSet& ps, const Bipartition& mu, std::span<const Complex> x, Complex d)
{
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex t = ps.t, cc = ps.c;
    const int n = ps.n, k1 = ps.k_at(1), kn = ps.k_at(n);
    if (static_cast<int>(x.size()) != k1)
        throw DomainError("xselberg_rhs needs k_1 variables x");
    const Complex tau = tau_n(ps);
    const Complex a = ipow(t, kn) * tau / ps.tp(2 * n + 4);
    const Complex cd = ipow(cc, n - 1) * d;

    LogProduct v;
    for (Complex xi : x) {
        Complex b = ipow(t, kn) * cd * tau;
        v.mul(delta0_log(mu, a, std::vector<Complex>{b * xi, b / xi}, ctx));
        for (int r = 3; r <= 2 * n; ++r)
            v.mul(gamma_pm(cd * t / ps.tp(r), xi, nm));
        for (int r = 2 * n + 1; r <= 2 * n + 4; ++r)
            v.mul(gamma_pm(cd * ps.tp(r), xi, nm));
    }
    for (int r = 2; r <= n; ++r)
        for (int i = 1; i <= ps.k_at(r) - ps.k_at(r - 1); ++i) {
            v.mul(elliptic_gamma_log(ipow(t, i), nm));
            v.mul(elliptic_gamma_log(ipow(t, i - 1) * ipow(cc, 2 * r - 2 * n) * ps.tp(2 * r - 1) * ps.tp(2 * r), nm));
        }
    for (int r = 2 * n + 1; r <= 2 * n + 4; ++r)
        for (int s = r + 1; s <= 2 * n + 4; ++s)
            for (int i = 1; i <= kn; ++i)
                v.mul(elliptic_gamma_log(ipow(t, i - 1) * ps.tp(r) * ps.tp(s), nm));
    for (int r = 2; r <= n; ++r)
        for (int s = r + 1; s <= n; ++s)
            for (int i = 1; i <= ps.k_at(r) - ps.k_at(r - 1); ++i) {
                v.mul(elliptic_gamma_log(ipow(t, i) * ps.tp(2 * r - 1) / ps.tp(2 * s - 1), nm));
                v.mul(elliptic_gamma_log(ipow(t, i) * ps.tp(2 * r) / ps.tp(2 * s), nm));
            }
    for (int r = 2; r <= n; ++r)
        for (int s = 2 * n + 1; s <= 2 * n + 4; ++s)
            for (int i = 1; i <= ps.k_at(r) - ps.k_at(r - 1); ++i) {
                v.mul(elliptic_gamma_log(ipow(t, i - 1) * ps.tp(2 * r - 1) * ps.tp(s), nm));
                v.mul(elliptic_gamma_log(ipow(t, i - 1) * ps.tp(2 * r) * ps.tp(s), nm));
            }
    return v.value() * mu_part(ps, nullptr, mu, tau, a);
}

ParamSet key_theorem_from_xselberg(const ParamSet& base)
{
    // (c, t_1, t_2, t_3, t_4, v_1, v_2) -> (d, t_3, t_6, t_5, t_4, t_4/t, t_5/t)
    ParamSet k;
    k.n = 1;
    k.k = {1};
    k.p = base.p;
    k.q = base.q;
    k.t = base.t;
    k.branch_tag = base.branch_tag;
    k.set_c();
    k.ts = {base.tp(3), base.tp(6), base.tp(5), base.tp(4)};
    k.extra["c"] = base.extra_at("d");
    k.extra["v1"] = base.tp(4) / base.t;
    k.extra["v2"] = base.tp(5) / base.t;
    k.extra["x"] = base.extra_at("x");
    return k;
}

Complex key_theorem_rhs(const ParamSet& ps, const Bipartition& mu)
{
    const SymbolContext ctx = ps.ctx();
    const NomePair nm = ps.nomes();
    const Complex t = ps.t, cc = ps.extra_at("c"), v1 = ps.extra_at("v1"), v2 = ps.extra_at("v2"),
                  x = ps.extra_at("x");
    const std::vector<Complex>& T = ps.ts;
    LogProduct r;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j)
            r.mul(elliptic_gamma_log(T[i] * T[j], nm));
        r.mul(gamma_pm(cc * T[i], x, nm));
    }
    const Complex a = t * T[0] * v1 * v2 / T[1];
    r.mul(delta0_log(mu, a, std::vector<Complex>{t * T[0] * v1}, ctx));
    r.div(delta0_log(mu, a, std::vector<Complex>{cc * cc * t * T[0] * v1}, ctx));
    BinomialCache cache(0x6b7);
    std::vector<Complex> xs{x};
    r.mul(InterpEvaluator::hybrid(mu, 1, {cc * v1, v2 / cc}, cc * t * T[0] * v1 * v2, cc * T[1], ctx, cache)(xs));
    return r.value();
}

std::vector<PoleCondition> case_conditions(const IdentityCase& c)
{
    const ParamSet& ps = c.params;
    const SymbolContext ctx = ps.ctx();
    const Bipartition& lam = c.shapes.lam;
    const Bipartition& mu = c.shapes.mu;
    std::vector<PoleCondition> out;
    auto mu_poles = [&](Complex b, const std::string& src) {
        if (!mu.empty())
            append(out, interpolation_conditions(integrand_pole_map(mu, b, ctx), src));
    };
    auto lam_poles = [&](Complex b, const std::string& src) {
        if (!lam.empty())
            append(out, interpolation_conditions(integrand_pole_map(lam, b, ctx), src));
    };

    switch (c.family) {
    case Family::beta_k1:
    case Family::selberg_A1:
    case Family::an_selberg:
        return an_contour_conditions(ps);
    case Family::an_aflt:
    case Family::an_kadell:
    case Family::an_hua_kadell: {
        const int n = ps.n;
        out = an_contour_conditions(ps);
        lam_poles(ipow(ps.c, 1 - n) * ps.tp(2), "level 1 lambda");
        relax_numerator(out, ipow(ps.c, 1 - n) * ps.tp(1), lam, ps.k_at(1), ctx);
        if (c.family != Family::an_kadell)
            mu_poles(ps.tp(2 * n + 4), "level " + std::to_string(n) + " mu");
        if (c.family == Family::an_hua_kadell)
            relax_numerator(out, ps.tp(2 * n + 1), mu, ps.k_at(n), ctx);
        return out;
    }
    case Family::vdBult:
        add_params(out, ps.ts, tnames(1, 4));
        add_pm(out, "c", "x", ps.c, ps.extra_at("x"));
        mu_poles(ps.ts.at(1), "mu");
        relax_numerator(out, ps.ts.at(0), mu, 1, ctx);
        return out;
    case Family::key_theorem:
        add_params(out, ps.ts, tnames(1, 4));
        add_pm(out, "c", "x", ps.extra_at("c"), ps.extra_at("x"));
        mu_poles(ps.ts.at(1), "mu");
        return out;
    case Family::prop_RK:
        add_params(out, {ps.ts.at(1), ps.ts.at(2), ps.ts.at(3), ps.ts.at(4)}, tnames(2, 5));
        add_pm(out, "c", "x", ps.extra_at("c"), ps.extra_at("x"));
        mu_poles(ps.ts.at(1), "mu");
        return out;
    case Family::kernel_decomp: {
        const Complex b = ps.extra_at("b"), d = ps.extra_at("d"), x = ps.extra_at("x");
        if (c.variant == "corollary") {
            add_params(out, {b, ps.t / (b * d * d)}, {"b", "t/(b d^2)"});
            add_pm(out, "(pq/t)^(1/2)", "x", ps.c, x);
        } else {
            const Complex cc = ps.extra_at("c");
            add_params(out, {b, ps.pq() / (b * cc * cc * d * d)}, {"b", "pq/(b c^2 d^2)"});
            add_pm(out, "c", "x", cc, x);
        }
        add_pm(out, "d", "y", d, ps.extra_at("y"));
        return out;
    }
    case Family::prop_xselberg_base: {
        const int n = ps.n;
        const Complex d = ps.extra_at("d"), x = ps.extra_at("x");
        out = without_level1_t12(an_contour_conditions(ps));
        add_pm(out, "d", "x", d, x);
        mu_poles(ps.tp(2 * n + 4), "level " + std::to_string(n) + " mu");
        if (c.variant == "step")
            add_pm(out, "c d", "x", ps.c * d, x);
        return out;
    }
    case Family::equal_k_recursion:
        out = an_contour_conditions(ps);
        lam_poles(ps.tp(2) / ps.c, "level 1 lambda");
        mu_poles(ps.tp(8), "level 2 mu");
        add_params(out, {ps.tp(1), ps.tp(2), ps.tp(5), ps.tp(6), ps.tp(7), ps.tp(8)},
                   {"reduced t_1", "reduced t_2", "reduced t_5", "reduced t_6", "reduced t_7", "reduced t_8"});
        lam_poles(ps.tp(2), "reduced lambda");
        relax_numerator(out, ps.tp(1) / ps.c, lam, 1, ctx);
        relax_numerator(out, ps.tp(1), lam, 1, ctx);
        return out;
    case Family::kernel_consistency: {
        const KernelSpec spec = consistency_spec(c);
        const Complex rt = std::sqrt(ps.t);
        out = kernel_k2_conditions(spec, rt);
        for (auto& cond : kernel_k2_conditions(spec, -rt)) {
            cond.what = "other branch: " + cond.what;
            out.push_back(cond);
        }
        return out;
    }
    case Family::algebraic_suite:
        break;
    }
    return out;
}

AssembledCase assemble(const IdentityCase& c, int inner_threads)
{
    check_shapes(c);
    AssembledCase out = assemble_dispatch(c, inner_threads);
    out.conditions = case_conditions(c);
    return out;
}


} // namespace ellsel
