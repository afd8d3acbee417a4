#include "ellsel/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ellsel {

namespace {

double rel_diff(Complex lhs, Complex rhs)
{
    double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

Complex product(std::span<const Complex> vs)
{
    Complex out = 1.0;
    for (Complex v : vs)
        out *= v;
    return out;
}

std::span<const Complex> x_part(const InterpSpec& spec)
{
    if (spec.x_count < 0 || spec.x_count > static_cast<int>(spec.variables.size()))
        throw DomainError("hybrid interpolation: x_count out of range");
    return std::span<const Complex>(spec.variables).first(static_cast<std::size_t>(spec.x_count));
}

std::span<const Complex> v_part(const InterpSpec& spec)
{
    auto rest = std::span<const Complex>(spec.variables).subspan(static_cast<std::size_t>(spec.x_count));
    if (rest.size() % 2 != 0)
        throw DomainError("hybrid interpolation: odd number of v variables");
    return rest;
}

Complex hybrid_with_root(const InterpSpec& spec, Complex root, BinomialCache& cache)
{
    auto xs = x_part(spec);
    auto vs = v_part(spec);
    const Complex t = spec.ctx.t;
    const int k = static_cast<int>(xs.size());
    const int l = static_cast<int>(vs.size() / 2);
    std::vector<Complex> list;
    for (Complex x : xs) {
        list.push_back(root * x);
        list.push_back(root / x);
    }
    for (Complex v : vs)
        list.push_back(root * v);
    InterpSpec sk{spec.lam, {}, ipow(t, k - 1) * root * spec.a, root * spec.b, spec.ctx, list, InterpKind::skew, 0};
    Complex num = interp_skew(sk, cache);
    Complex arg[] = {ipow(t, k + l) * product(vs)};
    return num / delta0(spec.lam, ipow(t, k - 1) * spec.a / spec.b, arg, spec.ctx);
}

} // namespace

double PoleMap::log_margin(double radius) const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : to_zero)
        m = std::min(m, std::log(radius / std::abs(s.head)));
    return m;
}

PoleMap pole_map(const Bipartition& mu, Complex b, const SymbolContext& ctx)
{
    PoleMap out;
    const Complex t = ctx.t;
    // first component: ratio q, shifts in p; second component with p and q exchanged
    auto add = [&](const Partition& part, Complex ratio, Complex shift) {
        for (int j = 1; j <= part.length(); ++j)
            for (int l = 1; l <= part[j]; ++l) {
                out.to_zero.push_back({ratio * ipow(shift, l) * ipow(t, 1 - j) / b, ratio});
                out.to_zero.push_back({b * ipow(t, j - 1) * ipow(shift, -l), ratio});
            }
    };
    add(mu.first, ctx.nomes.q, ctx.nomes.p);
    add(mu.second, ctx.nomes.p, ctx.nomes.q);
    return out;
}

PoleMap integrand_pole_map(const Bipartition& mu, Complex b, const SymbolContext& ctx)
{
    PoleMap out;
    const Complex p = ctx.nomes.p, q = ctx.nomes.q;
    const int m1 = mu.first[1], m2 = mu.second[1];
    if (m1 > 0)
        out.to_zero.push_back({b * ipow(p, -m1), q});
    if (m2 > 0)
        out.to_zero.push_back({b * ipow(q, -m2), p});
    if (m1 > 0 && m2 > 0)
        out.to_zero.push_back({b * ipow(p, -m1) * ipow(q, -m2), 0.0});
    auto tail = [](const Partition& part) {
        return part.empty() ? part : Partition(std::vector<int>(part.parts().begin() + 1, part.parts().end()));
    };
    const Bipartition rest{tail(mu.first), tail(mu.second)};
    for (const auto& s : pole_map(rest, b * ctx.t, ctx).to_zero)
        out.to_zero.push_back(s);
    return out;
}

InterpEvaluator::InterpEvaluator(const Bipartition& lam, int k, Complex b, const SymbolContext& ctx)
    : k_(k), ctx_(ctx)
{
    if (k < 0)
        throw DomainError("interpolation: negative number of variables");
    s_ = ctx.pq() / (ctx.t * b);
    den_ = ctx.pq() / b;
    const Partition* parts[2] = {&lam.first, &lam.second};
    const Complex shifts[2] = {ctx.nomes.p, ctx.nomes.q};
    const Complex nomes[2] = {ctx.nomes.q, ctx.nomes.p};
    for (int c = 0; c < 2; ++c) {
        comp_[c].shift = shifts[c];
        comp_[c].nome = nomes[c];
        const Partition& part = *parts[c];
        for (int i = 1; i <= part.length(); ++i)
            for (int j = 1; j <= part[i]; ++j) {
                comp_[c].cells.emplace_back(i, j);
                comp_[c].factor.push_back(ipow(shifts[c], j - 1) * ipow(ctx.t, 1 - i));
            }
    }
}

void InterpEvaluator::add_term(const Bipartition& mu, Complex coef)
{
    Term term{coef, {}};
    const Partition* parts[2] = {&mu.first, &mu.second};
    for (int c = 0; c < 2; ++c) {
        const auto& cells = comp_[c].cells;
        for (std::size_t idx = 0; idx < cells.size(); ++idx) {
            auto [i, j] = cells[idx];
            if (j <= (*parts[c])[i])
                term.cells[c].push_back(static_cast<int>(idx));
        }
    }
    coefs_.push_back(std::move(term));
}

InterpEvaluator InterpEvaluator::nonskew(const Bipartition& lam, int k, Complex a, Complex b,
                                         const SymbolContext& ctx, BinomialCache& cache)
{
    InterpEvaluator ev(lam, k, b, ctx);
    if (lam.length() > k) {
        ev.zero_ = true;
        return ev;
    }
    const Complex t = ctx.t, pq = ctx.pq();
    const Complex A = ipow(t, k - 1) * a / b;
    const Complex B = ipow(t, k) * a * b / pq;
    for (const auto& mu : sub_bipartitions(lam))
        ev.add_term(mu, binomial({lam, mu, A, B, ctx, {pq * a / (t * b)}}, cache));
    return ev;
}

InterpEvaluator InterpEvaluator::hybrid(const Bipartition& lam, int k, const std::vector<Complex>& vs, Complex a,
                                        Complex b, const SymbolContext& ctx, BinomialCache& cache)
{
    if (vs.empty())
        return nonskew(lam, k, a, b, ctx, cache);
    if (vs.size() % 2 != 0)
        throw DomainError("hybrid interpolation: odd number of v variables");
    InterpEvaluator ev(lam, k, b, ctx);
    const Complex t = ctx.t, pq = ctx.pq();
    const int l = static_cast<int>(vs.size() / 2);
    const Complex A = ipow(t, k - 1) * a / b;
    const Complex B = ipow(t, k) * a * b / pq;
    const Complex base = pq / (t * b * b);
    std::vector<Complex> brackets;
    for (Complex v : vs)
        brackets.push_back(pq / (t * b * v));
    brackets.push_back(pq * ipow(t, l) * product(vs) / (a * b));
    Complex norm_arg[] = {ipow(t, k + l) * product(vs)};
    LogProduct norm = delta0_log(lam, A, norm_arg, ctx);
    for (const auto& mu : sub_bipartitions(lam)) {
        LogProduct c = delta0_log(mu, base, brackets, ctx);
        c.div(norm);
        ev.add_term(mu, binomial_plain(lam, mu, A, B, ctx, cache) * c.value());
    }
    return ev;
}

Complex InterpEvaluator::operator()(std::span<const Complex> x, double* max_term) const
{
    if (static_cast<int>(x.size()) != k_)
        throw DomainError("interpolation: expected " + std::to_string(k_) + " variables");
    if (max_term)
        *max_term = 0.0;
    if (zero_)
        return 0.0;
    const double eps = ctx_.nomes.eps_tail;
    // per cell: prod_i theta(s x_i e) theta(s e / x_i) / (theta(pq e / b x_i) theta(pq e x_i / b))
    std::vector<Complex> cell[2];
    for (int c = 0; c < 2; ++c) {
        const Component& comp = comp_[c];
        cell[c].assign(comp.factor.size(), 1.0);
        for (std::size_t idx = 0; idx < comp.factor.size(); ++idx) {
            Complex e = comp.factor[idx];
            Complex r = 1.0;
            for (Complex xi : x) {
                Complex num = theta(s_ * e * xi, comp.nome, eps) * theta(s_ * e / xi, comp.nome, eps);
                Complex den = theta(den_ * e / xi, comp.nome, eps) * theta(den_ * e * xi, comp.nome, eps);
                if (den == Complex(0.0))
                    throw PoleError("interpolation function evaluated at a pole");
                r *= num / den;
            }
            cell[c][idx] = r;
        }
    }
    Complex sum = 0.0;
    double biggest = 0.0;
    for (const auto& term : coefs_) {
        Complex v = term.coef;
        for (int c = 0; c < 2; ++c)
            for (int idx : term.cells[c])
                v *= cell[c][static_cast<std::size_t>(idx)];
        sum += v;
        biggest = std::max(biggest, std::abs(v));
    }
    if (max_term)
        *max_term = biggest;
    return sum;
}

Complex interp_nonskew(const InterpSpec& spec, BinomialCache& cache, double* max_term)
{
    auto ev = InterpEvaluator::nonskew(spec.lam, static_cast<int>(spec.variables.size()), spec.a, spec.b, spec.ctx,
                                       cache);
    return ev(spec.variables, max_term);
}

Complex interp_skew(const InterpSpec& spec, BinomialCache& cache, double* max_term)
{
    if (max_term)
        *max_term = 0.0;
    if (spec.variables.size() % 2 != 0)
        throw DomainError("skew interpolation: odd number of variables");
    if (!contains(spec.lam, spec.nu))
        return 0.0;
    const auto& [lam, nu, a, b, ctx, vs, kind, xc] = spec;
    const Complex pq = ctx.pq();
    const Complex V = product(vs);
    std::vector<Complex> brackets;
    for (Complex v : vs)
        brackets.push_back(pq / (b * v));
    Complex sum = 0.0;
    double biggest = 0.0;
    for (const auto& mu : sub_bipartitions(lam)) {
        if (!contains(mu, nu))
            continue;
        Complex term = delta0(mu, pq / (b * b), brackets, ctx) * binomial_plain(lam, mu, a / b, a * b / pq, ctx, cache) *
                       binomial_plain(mu, nu, pq / (b * b), pq * V / (a * b), ctx, cache);
        sum += term;
        biggest = std::max(biggest, std::abs(term));
    }
    if (max_term)
        *max_term = biggest;
    return sum;
}

Complex interp_hybrid(const InterpSpec& spec, BinomialCache& cache)
{
    if (v_part(spec).empty()) {
        InterpSpec ns = spec;
        ns.variables.assign(x_part(spec).begin(), x_part(spec).end());
        return interp_nonskew(ns, cache);
    }
    Complex root = std::sqrt(spec.ctx.t);
    Complex principal = hybrid_with_root(spec, root, cache);
    Complex other = hybrid_with_root(spec, -root, cache);
    if (rel_diff(principal, other) > 1e-8)
        throw Error("hybrid interpolation value depends on the branch of t^(1/2)");
    return principal;
}

double hybrid_branch_discrepancy(const InterpSpec& spec, BinomialCache& cache)
{
    if (v_part(spec).empty())
        return 0.0;
    Complex root = std::sqrt(spec.ctx.t);
    return rel_diff(hybrid_with_root(spec, root, cache), hybrid_with_root(spec, -root, cache));
}

Complex interp(const InterpSpec& spec, BinomialCache& cache)
{
    switch (spec.kind) {
    case InterpKind::nonskew:
        return interp_nonskew(spec, cache);
    case InterpKind::skew:
        return interp_skew(spec, cache);
    case InterpKind::hybrid:
        return interp_hybrid(spec, cache);
    }
    throw DomainError("interpolation: unknown kind");
}

double branching_check(const InterpSpec& spec, Complex w1, Complex w2, BinomialCache& cache)
{
    const auto& [lam, nu, a, b, ctx, xs, kind, xc] = spec;
    const Complex t = ctx.t, pq = ctx.pq(), w = w1 * w2;
    const int k = static_cast<int>(xs.size());
    // residuals are measured against the largest summand on either side, since
    // some specialisations make both sides vanish identically
    double scale = 0.0, term = 0.0;

    // skew form with the bracket list [x_i^{+-}]
    std::vector<Complex> list;
    for (Complex x : xs) {
        list.push_back(x);
        list.push_back(1.0 / x);
    }
    std::vector<Complex> longer = list;
    longer.push_back(w1);
    longer.push_back(w2);
    Complex lhs = interp_skew({lam, nu, a, b, ctx, longer, InterpKind::skew, 0}, cache, &term);
    scale = std::max(scale, term);
    Complex rhs = 0.0;
    for (const auto& mu : sub_bipartitions(lam)) {
        if (!contains(mu, nu))
            continue;
        Complex coef = binomial({lam, mu, a / b, w, ctx, {a / w1, a / w2}}, cache);
        rhs += coef * interp_skew({mu, nu, a / w, b, ctx, list, InterpKind::skew, 0}, cache, &term);
        scale = std::max(scale, std::abs(coef) * term);
    }
    double skew_res = std::abs(lhs - rhs) / std::max({scale, std::abs(lhs), std::abs(rhs), 1e-300});

    // hybrid form: x's together with the pair (w1, w2), parameter a t
    std::vector<Complex> vars(xs.begin(), xs.end());
    vars.push_back(w1);
    vars.push_back(w2);
    Complex hl = interp_hybrid({lam, {}, a * t, b, ctx, vars, InterpKind::hybrid, k}, cache);
    Complex hr = 0.0;
    scale = 0.0;
    const Complex tk = ipow(t, k);
    for (const auto& mu : sub_bipartitions(lam)) {
        Complex coef = binomial({lam, mu, tk * a / b, t * w, ctx, {tk * a / w1, tk * a / w2, pq * a / (t * b * w)}},
                                cache);
        hr += coef * interp_nonskew({mu, {}, a / w, b, ctx, xs, InterpKind::nonskew, 0}, cache, &term);
        scale = std::max(scale, std::abs(coef) * term);
    }
    double hybrid_res = std::abs(hl - hr) / std::max({scale, std::abs(hl), std::abs(hr), 1e-300});
    return std::max(skew_res, hybrid_res);
}

} // namespace ellsel
