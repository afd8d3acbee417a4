#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellsel/interpolation.hpp"
#include "ellsel/kernel.hpp"

using namespace ellsel;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Complex rnd(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(lo + (hi - lo) * u(rng), 2 * M_PI * u(rng));
}

std::vector<Complex> circle(std::mt19937_64& rng, int k)
{
    std::vector<Complex> z;
    for (int i = 0; i < k; ++i)
        z.push_back(rnd(rng, 1.0, 1.0));
    return z;
}

SymbolContext ctx_of(std::mt19937_64& rng)
{
    return {{rnd(rng, 0.1, 0.2), rnd(rng, 0.1, 0.2)}, rnd(rng, 0.4, 0.6)};
}

} // namespace

TEST_CASE("k <= 1 closed forms")
{
    std::mt19937_64 rng(1);
    SymbolContext ctx = ctx_of(rng);
    CHECK(kernel({0.3, {}, {}, ctx}).value == Complex(1.0));

    for (int i = 0; i < 10; ++i) {
        Complex c = rnd(rng, 0.2, 0.8), x = rnd(rng, 0.7, 1.3), y = rnd(rng, 0.7, 1.3);
        Complex v = kernel_k1(c, x, y, ctx);
        CHECK(rel(kernel_k1(c, y, x, ctx), v) < 1e-12);
        CHECK(rel(kernel_k1(-c, -x, y, ctx), v) < 1e-12);
        SymbolContext sw{ctx.nomes.swapped(), ctx.t};
        CHECK(rel(kernel_k1(c, x, y, sw), v) < 1e-12);
        CHECK(kernel_t_reflection_check({c, {x}, {y}, ctx}) < 1e-10);
    }

    // on the factoring locus Gamma(t) Gamma(c^2) = Gamma(t) Gamma(pq/t) = 1
    Complex c = std::sqrt(ctx.pq() / ctx.t), x = rnd(rng, 1, 1), y = rnd(rng, 1, 1);
    std::vector<Complex> xs{x}, ys{y};
    CHECK(rel(kernel_k1(c, x, y, ctx), kernel_factored(xs, ys, ctx)) < 1e-12);
}

TEST_CASE("k=2 on the factoring locus")
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 3; ++i) {
        SymbolContext ctx = ctx_of(rng);
        KernelSpec s{std::sqrt(ctx.pq() / ctx.t), circle(rng, 2), circle(rng, 2), ctx};
        KernelValue v = kernel_k2(s);
        CHECK(rel(v.value, kernel_factored(s.x, s.y, ctx)) < 1e-7);
        CHECK(v.branch_discrepancy < 1e-10);
    }
}

TEST_CASE("k=2 at a spectral point is an interpolation function")
{
    std::mt19937_64 rng(3);
    const Bipartition lam = parse_bipartition("1|0");
    for (int i = 0; i < 3; ++i) {
        SymbolContext ctx{{rnd(rng, 0.1, 0.1), rnd(rng, 0.1, 0.1)}, rnd(rng, 0.6, 0.6)};
        Complex a = rnd(rng, 0.5, 0.5), c = rnd(rng, 0.11, 0.11);
        const Complex t = ctx.t, b = c * c / (t * a);
        auto spec = spectral_vector(lam, 2, t, ctx.nomes.p, ctx.nomes.q);
        KernelSpec s{c, circle(rng, 2), {a * spec[0] / c, a * spec[1] / c}, ctx};
        Complex lhs = kernel_k2(s).value;

        BinomialCache cache(7);
        auto R = InterpEvaluator::nonskew(lam, 2, a, b, ctx, cache);
        LogProduct rhs;
        rhs.mul_log(std::log(R(s.x)));
        for (int j = 1; j <= 2; ++j) {
            rhs.mul(gamma_pm(a, s.x[static_cast<std::size_t>(j - 1)], ctx.nomes));
            rhs.mul(gamma_pm(b, s.x[static_cast<std::size_t>(j - 1)], ctx.nomes));
            rhs.div(elliptic_gamma_log(ipow(t, j), ctx.nomes));
            rhs.div(elliptic_gamma_log(ipow(t, j - 1) * a * b, ctx.nomes));
        }
        CHECK(rel(lhs, rhs.value()) < 1e-6);
    }
}

TEST_CASE("k=2 symmetries")
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 2; ++i) {
        SymbolContext ctx{{rnd(rng, 0.15, 0.15), rnd(rng, 0.15, 0.15)}, rnd(rng, 0.5, 0.5)};
        KernelSpec s{rnd(rng, 0.3, 0.3), circle(rng, 2), circle(rng, 2), ctx};
        Complex v = kernel_k2(s).value;

        KernelSpec swapped = s;
        std::swap(swapped.x, swapped.y);
        CHECK(rel(kernel_k2(swapped).value, v) < 1e-7);

        KernelSpec pq = s;
        pq.ctx.nomes = ctx.nomes.swapped();
        CHECK(rel(kernel_k2(pq).value, v) < 1e-7);

        KernelSpec neg = s;
        neg.c = -s.c;
        for (auto& x : neg.x)
            x = -x;
        CHECK(rel(kernel_k2(neg).value, v) < 1e-7);

        KernelSpec inv = s;
        inv.x[0] = 1.0 / inv.x[0];
        inv.y[1] = 1.0 / inv.y[1];
        CHECK(rel(kernel_k2(inv).value, v) < 1e-7);
    }
}

TEST_CASE("k=2 reflection in t")
{
    std::mt19937_64 rng(5);
    SymbolContext ctx{{rnd(rng, 0.1, 0.1), rnd(rng, 0.1, 0.1)}, rnd(rng, 0.3, 0.3)};
    KernelSpec s{rnd(rng, 0.1, 0.1), circle(rng, 2), circle(rng, 2), ctx};
    CHECK(kernel_t_reflection_check(s) < 1e-6);
}

TEST_CASE("inner quadrature converges")
{
    std::mt19937_64 rng(6);
    SymbolContext ctx = ctx_of(rng);
    KernelSpec s{rnd(rng, 0.3, 0.3), circle(rng, 2), circle(rng, 2), ctx};
    KernelSpec fine = s;
    fine.inner_grid = 256;
    CHECK(rel(kernel_k2(s).value, kernel_k2(fine).value) <= 1e-8);
}

TEST_CASE("infeasible inner contour")
{
    SymbolContext ctx{{0.1, 0.1}, 0.5};
    KernelSpec s{0.9, {1.0, Complex(0, 1)}, {1.0, -1.0}, ctx};
    auto conds = kernel_k2_conditions(s, std::sqrt(ctx.t));
    CHECK_FALSE(evaluate_conditions(conds).feasible);
    CHECK_THROWS_AS(kernel_k2(s), ContourError);
    s.x = {1.0};
    CHECK_THROWS_AS(kernel(s), DomainError);
}
