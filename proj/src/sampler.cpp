#include "ellsel/sampler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace ellsel {

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * u_(rng_); }

    Complex unit() { return std::polar(1.0, uniform(0.0, 2 * std::numbers::pi)); }

    // log-uniform modulus in [lo, hi], uniform phase
    Complex polar(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))) * unit(); }

    std::optional<Complex> polar_in(double lo, double hi)
    {
        if (!(lo < hi))
            return std::nullopt;
        return polar(lo, hi);
    }

private:
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> u_{0.0, 1.0};
};

struct Box {
    double nome_lo, nome_hi, t_lo, t_hi;
};

constexpr double kFloor = 0.05; // smallest modulus of a free parameter

void draw_context(Draw& d, ParamSet& ps, const Box& box)
{
    ps.p = d.polar(box.nome_lo, box.nome_hi);
    ps.q = d.polar(box.nome_lo, box.nome_hi);
    ps.t = d.polar(box.t_lo, box.t_hi);
    ps.set_c();
}

Box box_for(const DrawRequest& req)
{
    const bool shaped = !req.shapes.lam.empty() || !req.shapes.mu.empty();
    Box b{0.05, 0.3, 0.1, 0.6};
    if (shaped)
        b.nome_lo = 0.04, b.nome_hi = 0.6, b.t_lo = 0.02;
    if (req.n >= 2)
        b.t_lo = 0.02, b.t_hi = 0.4;
    return b;
}

using Attempt = std::optional<IdentityCase>;

// Largest |a| in R*_mu(x; a, b) for one variable: the numerator leaves only the
// head a p^m1 q^m2 of the Gamma(a x^+-) poles.
double numerator_reach(const Bipartition& mu, int vars, const SymbolContext& ctx, double radius)
{
    if (vars != 1 || mu.empty())
        return radius;
    return radius / std::abs(ipow(ctx.nomes.p, mu.first[1]) * ipow(ctx.nomes.q, mu.second[1]));
}

bool mixed(const Bipartition& mu)
{
    return !mu.first.empty() && !mu.second.empty();
}

// m factors with moduli in [lo, hi] and product P, or nothing if impossible.
std::optional<std::vector<Complex>> split(Draw& d, Complex P, int m, double lo, double hi)
{
    std::vector<Complex> out;
    Complex rest = P;
    for (int i = 0; i + 1 < m; ++i) {
        const int after = m - 1 - i;
        const double a = std::max(lo, std::abs(rest) / std::pow(hi, after));
        const double b = std::min(hi, std::abs(rest) / std::pow(lo, after));
        auto f = d.polar_in(a, b);
        if (!f)
            return std::nullopt;
        out.push_back(*f);
        rest /= *f;
    }
    if (!(std::abs(rest) >= lo && std::abs(rest) <= hi))
        return std::nullopt;
    out.push_back(rest);
    return out;
}

// A_n layout: t_{2r-1}, t_{2r} are scaled by c^{n-r}; the top level is drawn
// directly, with t_{2n+4} inside the mu interval and one of the others solved.
Attempt draw_an(Draw& d, const DrawRequest& req, double radius)
{
    IdentityCase c;
    c.family = req.family;
    c.variant = req.variant;
    c.shapes = req.shapes;
    ParamSet& ps = c.params;
    ps.n = req.n;
    ps.k = req.k;
    draw_context(d, ps, box_for(req));
    const int n = ps.n;
    const Complex t = ps.t, cc = ps.c;
    const SymbolContext ctx = ps.ctx();
    if (std::abs(cc) >= radius)
        return std::nullopt;
    ps.ts.assign(static_cast<std::size_t>(2 * n + 4), 0.0);
    auto set = [&](int i, Complex v) { ps.ts[static_cast<std::size_t>(i - 1)] = v; };

    const double lower = std::max(kFloor, std::abs(t * cc) / radius * 1.01);
    const double reach = numerator_reach(req.shapes.lam, ps.k_at(1), ctx, radius);
    for (int r = 1; r < n; ++r) {
        auto u = d.polar_in(r == 1 ? kFloor : lower, r == 1 ? reach : radius);
        if (!u)
            return std::nullopt;
        set(2 * r - 1, ipow(cc, n - r) * *u);
    }
    if (n == 1)
        set(1, d.polar(0.1, reach));

    // t_2 carries the level-1 lambda poles through b = c^{1-n} t_2
    auto [llo, lhi] = pole_interval(req.shapes.lam, ctx, radius);
    auto u2 = d.polar_in(std::max(llo * 1.01, std::min(n == 1 ? 0.1 : kFloor, lhi / 4)), std::min(lhi / 1.01, radius));
    if (!u2)
        return std::nullopt;
    set(2, ipow(cc, n - 1) * *u2);

    const bool hua = req.family == Family::an_hua_kadell;
    auto [mlo, mhi] = pole_interval(req.shapes.mu, ctx, radius);
    auto top = d.polar_in(std::max(mlo * 1.01, std::min(0.1, mhi / 4)), std::min(mhi / 1.01, radius));
    if (!top)
        return std::nullopt;
    set(2 * n + 4, *top);

    // r = 1 balancing fixes the product of the remaining top parameters
    Complex rest = ps.pq() / (ipow(t, ps.k_at(1) - ps.k_at(0) + ps.k_at(n) - 2) * ps.tp(1) * ps.tp(2) * *top);
    if (hua) {
        auto a = d.polar_in(std::abs(t) / radius * 1.01, radius);
        if (!a)
            return std::nullopt;
        set(2 * n + 2, *a);
        set(2 * n + 3, t / *a);
        set(2 * n + 1, rest / t);
    } else {
        auto f = split(d, rest, 3, kFloor, radius);
        if (!f)
            return std::nullopt;
        for (int i = 0; i < 3; ++i)
            set(2 * n + 1 + i, (*f)[static_cast<std::size_t>(i)]);
    }

    for (int r = 2; r <= n; ++r) {
        if (r == n)
            set(2 * r - 1, d.polar(lower, radius));
        ps.solve_partner(r);
    }
    return c;
}

Attempt draw_one_dim(Draw& d, const DrawRequest& req, double radius)
{
    IdentityCase c;
    c.family = req.family;
    c.variant = req.variant;
    c.shapes = req.shapes;
    ParamSet& ps = c.params;
    ps.n = 1;
    ps.k = {1};
    draw_context(d, ps, box_for(req));
    const Complex t = ps.t, pq = ps.pq();
    const SymbolContext ctx = ps.ctx();
    auto [mlo, mhi] = pole_interval(req.shapes.mu, ctx, radius);
    auto b = d.polar_in(std::max(mlo * 1.01, kFloor), std::min(mhi / 1.01, radius));
    if (!b)
        return std::nullopt;
    const Complex x = d.unit();
    // pq / (c^2 b) is split into three factors below radius
    auto free_c = [&]() { return d.polar_in(std::max(kFloor, std::sqrt(std::abs(pq / *b) / std::pow(radius, 3))), radius); };
    switch (req.family) {
    case Family::vdBult: {
        if (mixed(req.shapes.mu)) {
            // b sits below |pq|, so t_1 has to grow past 1
            const Complex t3 = d.polar(kFloor, radius), t4 = d.polar(kFloor, radius), t1 = t / (*b * t3 * t4);
            if (std::abs(t1) > numerator_reach(req.shapes.mu, 1, ctx, radius))
                return std::nullopt;
            ps.ts = {t1, *b, t3, t4};
            ps.extra["x"] = x;
            break;
        }
        auto f = split(d, t / *b, 3, kFloor, radius);
        if (!f)
            return std::nullopt;
        ps.ts = {(*f)[0], *b, (*f)[1], (*f)[2]};
        ps.extra["x"] = x;
        break;
    }
    case Family::key_theorem: {
        auto cc = free_c();
        if (!cc)
            return std::nullopt;
        auto f = split(d, pq / (*cc * *cc * *b), 3, kFloor, radius);
        if (!f)
            return std::nullopt;
        ps.ts = {(*f)[0], *b, (*f)[1], (*f)[2]};
        ps.extra = {{"c", *cc}, {"v1", (*f)[2] / t}, {"v2", d.polar(0.3, 1.5)}, {"x", x}};
        break;
    }
    case Family::prop_RK: {
        auto cc = free_c();
        if (!cc)
            return std::nullopt;
        auto f = split(d, pq / (*cc * *cc * *b), 3, kFloor, radius);
        if (!f)
            return std::nullopt;
        ps.ts = {d.polar(0.1, radius), *b, (*f)[0], (*f)[1], (*f)[2]};
        ps.extra = {{"c", *cc}, {"x", x}};
        break;
    }
    case Family::kernel_decomp:
        ps.extra = {{"b", d.polar(kFloor, radius)}, {"d", d.polar(kFloor, radius)}, {"x", x}, {"y", d.unit()}};
        if (req.variant != "corollary")
            ps.extra["c"] = d.polar(kFloor, radius);
        break;
    default:
        throw ConfigError("no one-dimensional sampler for " + to_string(req.family));
    }
    return c;
}

Attempt draw_xselberg(Draw& d, const DrawRequest& req, double radius)
{
    IdentityCase c;
    c.family = req.family;
    c.variant = req.variant;
    c.shapes = req.shapes;
    ParamSet& ps = c.params;
    const bool step = req.variant == "step";
    ps.n = step ? 2 : 1;
    ps.k = step ? std::vector<int>{1, 1} : std::vector<int>{1};
    ps.k0 = step ? 0 : static_cast<int>(req.seed % 2);
    Box box = box_for(req);
    if (step)
        box.t_lo = 0.02, box.t_hi = 0.3;
    draw_context(d, ps, box);
    const int n = ps.n;
    const Complex t = ps.t, cc = ps.c;
    const SymbolContext ctx = ps.ctx();
    ps.ts.assign(static_cast<std::size_t>(2 * n + 4), 0.0);
    auto set = [&](int i, Complex v) { ps.ts[static_cast<std::size_t>(i - 1)] = v; };

    const double dlo = step ? std::sqrt(std::abs(t)) / radius * 1.01 : kFloor;
    auto dd = d.polar_in(dlo, radius);
    if (!dd)
        return std::nullopt;
    const Complex x = d.unit();
    ps.extra = {{"d", *dd}, {"x", x}};

    // d^2 = c^{2-2n} t^{k_1-k_0-1} t_1 t_2
    const Complex t12 = *dd * *dd * ipow(cc, 2 * n - 2) * ipow(t, ps.k0 + 1 - ps.k_at(1));
    const Complex t1 = d.polar(0.1, 1.0);
    set(1, t1);
    set(2, t12 / t1);

    auto [mlo, mhi] = pole_interval(req.shapes.mu, ctx, radius);
    auto top = d.polar_in(std::max(mlo * 1.01, std::min(0.1, mhi / 4)), std::min(mhi / 1.01, radius));
    if (!top)
        return std::nullopt;
    set(2 * n + 4, *top);
    auto f = split(d, ps.pq() / (ipow(t, ps.k_at(1) - ps.k0 + ps.k_at(n) - 2) * t12 * *top), 3, kFloor, radius);
    if (!f)
        return std::nullopt;
    for (int i = 0; i < 3; ++i)
        set(2 * n + 1 + i, (*f)[static_cast<std::size_t>(i)]);
    if (step) {
        auto t3 = d.polar_in(std::abs(t * cc) / radius * 1.01, radius);
        if (!t3)
            return std::nullopt;
        set(3, *t3);
        ps.solve_partner(2);
    }
    return c;
}

Attempt draw_consistency(Draw& d, const DrawRequest& req)
{
    IdentityCase c;
    c.family = req.family;
    c.variant = req.variant;
    c.shapes = req.shapes;
    ParamSet& ps = c.params;
    ps.n = 1;
    ps.k = {2};
    if (req.variant == "spectral") {
        ps.p = d.polar(0.09, 0.11);
        ps.q = d.polar(0.09, 0.11);
        ps.t = d.polar(0.55, 0.65);
        ps.set_c();
        ps.extra = {{"a", d.polar(0.45, 0.55)}, {"c", d.polar(0.1, 0.12)}, {"x1", d.unit()}, {"x2", d.unit()}};
    } else {
        ps.p = d.polar(0.05, 0.2);
        ps.q = d.polar(0.05, 0.2);
        ps.t = d.polar(0.3, 0.6);
        ps.set_c();
        ps.extra = {{"x1", d.unit()}, {"x2", d.unit()}, {"y1", d.unit()}, {"y2", d.unit()}};
    }
    return c;
}

Attempt attempt(Draw& d, const DrawRequest& req, double radius)
{
    switch (req.family) {
    case Family::beta_k1:
    case Family::selberg_A1:
    case Family::an_selberg:
    case Family::an_aflt:
    case Family::an_kadell:
    case Family::an_hua_kadell:
    case Family::equal_k_recursion:
        return draw_an(d, req, radius);
    case Family::vdBult:
    case Family::key_theorem:
    case Family::prop_RK:
    case Family::kernel_decomp:
        return draw_one_dim(d, req, radius);
    case Family::prop_xselberg_base:
        return draw_xselberg(d, req, radius);
    case Family::kernel_consistency:
        return draw_consistency(d, req);
    case Family::algebraic_suite:
        break;
    }
    throw ConfigError("no sampler for " + to_string(req.family));
}

} // namespace

std::pair<double, double> pole_interval(const Bipartition& mu, const SymbolContext& ctx, double radius)
{
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    if (mu.empty())
        return {lo, hi};
    // heads scale like b or 1/b; compare two values of b to tell which
    PoleMap one = integrand_pole_map(mu, 1.0, ctx), two = integrand_pole_map(mu, 2.0, ctx);
    for (std::size_t i = 0; i < one.to_zero.size(); ++i) {
        const double h = std::abs(one.to_zero[i].head);
        if (std::abs(two.to_zero[i].head) > h)
            hi = std::min(hi, radius / h);
        else
            lo = std::max(lo, h / radius);
    }
    return {lo, hi};
}

DrawOutcome draw_case(const DrawRequest& req)
{
    Draw d(req.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(req.family) + 1);
    const double radius = 1.0 - req.sample_delta;
    DrawOutcome out;
    ParamSet shape;
    shape.n = req.n;
    shape.k = req.k;
    if (auto bad = k_profile_violations(shape); !bad.empty()) {
        out.report.feasible = false;
        out.report.delta = req.delta;
        out.report.violations = bad;
        return out;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (out.tries = 1; out.tries <= req.max_tries; ++out.tries) {
        Attempt a;
        try {
            a = attempt(d, req, radius);
        } catch (const DomainError&) {
            continue;
        }
        if (!a)
            continue;
        a->seed = req.seed;
        FeasibilityReport strict = evaluate_conditions(case_conditions(*a), req.sample_delta);
        if (strict.feasible) {
            out.feasible = true;
            out.c = *a;
            out.report = evaluate_conditions(case_conditions(*a), req.delta);
            return out;
        }
        if (strict.log_margin > best) {
            best = strict.log_margin;
            out.c = *a;
        }
    }
    out.tries = req.max_tries;
    if (best > -std::numeric_limits<double>::infinity())
        out.report = evaluate_conditions(case_conditions(out.c), req.delta);
    else
        out.report.feasible = false, out.report.violations = {"no attempt met the balancing condition with every pole head inside the circle"};
    // the best draw may still clear the plain margin
    out.feasible = out.report.feasible;
    return out;
}

} // namespace ellsel
