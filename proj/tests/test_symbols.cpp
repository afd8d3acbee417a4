#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellsel/symbols.hpp"

using namespace ellsel;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Complex rnd(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(lo + (hi - lo) * u(rng), 2 * M_PI * u(rng));
}

Partition random_partition(std::mt19937_64& rng, int maxsize)
{
    std::uniform_int_distribution<int> n(0, maxsize);
    auto all = partitions_of(n(rng));
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    return all[pick(rng)];
}

} // namespace

TEST_CASE("C-symbols on small shapes")
{
    SymbolContext ctx{{0.1, 0.2}, 0.3};
    Complex z{0.7, 0.2};
    CHECK(c0(Partition{}, z, ctx) == Complex(1.0));
    CHECK(cplus(Partition{}, z, ctx) == Complex(1.0));
    CHECK(cminus(Partition{}, z, ctx) == Complex(1.0));

    // single row: prod_j theta_p(z q^j)
    Complex row = theta(z, 0.1) * theta(z * 0.2, 0.1) * theta(z * 0.04, 0.1);
    CHECK(rel(c0(Partition{3}, z, ctx), row) < 1e-13);

    CHECK(rel(cminus(Partition{1}, z, ctx), theta(z, 0.1)) < 1e-14);
    CHECK(rel(cplus(Partition{1}, z, ctx), theta(z * 0.2, 0.1)) < 1e-14);

    // single column (1,1): theta(z) theta(z/t)
    CHECK(rel(c0(Partition{1, 1}, z, ctx), theta(z, 0.1) * theta(z / 0.3, 0.1)) < 1e-13);
    // Role::P swaps the roles of p and q
    CHECK(rel(c0(Partition{2}, z, ctx, Role::P), theta(z, 0.2) * theta(z * 0.1, 0.2)) < 1e-13);
}

TEST_CASE("C+ and C- cell exponents for (2,1)")
{
    SymbolContext ctx{{Complex(0.12, 0.03), Complex(0.2, -0.05)}, Complex(0.3, 0.1)};
    Complex z{0.6, -0.3};
    Complex q = ctx.nomes.q, p = ctx.nomes.p, t = ctx.t;
    // lam=(2,1), lam'=(2,1); cells (1,1),(1,2),(2,1)
    Complex cp = theta(z * q * q * std::pow(t, -1.0), p) * theta(z * q * q * q, p) * theta(z * q * std::pow(t, -2.0), p);
    Complex cm = theta(z * q * t, p) * theta(z, p) * theta(z, p);
    CHECK(rel(cplus(Partition{2, 1}, z, ctx), cp) < 1e-12);
    CHECK(rel(cminus(Partition{2, 1}, z, ctx), cm) < 1e-12);
}

TEST_CASE("Delta0 reflection and lift")
{
    std::mt19937_64 rng(17);
    for (int s = 0; s < 100; ++s) {
        SymbolContext ctx{{rnd(rng, 0.05, 0.4), rnd(rng, 0.05, 0.4)}, rnd(rng, 0.1, 0.8)};
        Bipartition lam{random_partition(rng, 4), random_partition(rng, 4)};
        if (lam.size() > 4)
            continue;
        Complex a = rnd(rng, 0.2, 1.5), b = rnd(rng, 0.2, 1.5);
        Complex refl = ctx.pq() * a / b;
        Complex v1 = delta0(lam, a, {b}, ctx);
        Complex v2 = delta0(lam, a, {refl}, ctx);
        CHECK(std::abs(v1 * v2 - 1.0) < 1e-10);

        SymbolContext sw{ctx.nomes.swapped(), ctx.t};
        CHECK(rel(delta0(lam.swapped(), a, {b}, sw), v1) < 1e-12);
    }
    SymbolContext ctx{{0.1, 0.2}, 0.3};
    CHECK(delta0(Bipartition{Partition{2}, Partition{1}}, 0.5, {}, ctx) == Complex(1.0));
}

TEST_CASE("Delta0 paired arguments cancel")
{
    // Delta0(a | w, pqa/w) = 1 by reflection
    SymbolContext ctx{{0.15, 0.2}, 0.35};
    Bipartition lam{Partition{2, 1}, Partition{1}};
    Complex a{0.4, 0.1}, w{0.7, -0.2};
    CHECK(std::abs(delta0(lam, a, {w, ctx.pq() * a / w}, ctx) - 1.0) < 1e-11);
}

TEST_CASE("gamma-delta bridge")
{
    SymbolContext ctx{{0.1, 0.2}, 0.25};
    auto [l0, r0] = gamma_delta_bridge({}, 1, 0.4, 0.3, ctx);
    CHECK(std::abs(l0 - 1.0) < 1e-14);
    CHECK(std::abs(r0 - 1.0) < 1e-14);
    auto [l1, r1] = gamma_delta_bridge({Partition{1}, Partition{}}, 1, 0.4, 0.3, ctx);
    CHECK(rel(l1, r1) < 1e-10);
    auto [l2, r2] = gamma_delta_bridge({Partition{1}, Partition{1}}, 2, 0.4, 0.3, ctx);
    CHECK(rel(l2, r2) < 1e-10);

    std::mt19937_64 rng(23);
    for (int s = 0; s < 60; ++s) {
        SymbolContext c{{rnd(rng, 0.05, 0.35), rnd(rng, 0.05, 0.35)}, rnd(rng, 0.2, 0.7)};
        int n = 1 + s % 3;
        Bipartition lam{random_partition(rng, 3), random_partition(rng, 3)};
        if (lam.length() > n || lam.size() > 3)
            continue;
        auto [l, r] = gamma_delta_bridge(lam, n, rnd(rng, 0.3, 0.9), rnd(rng, 0.3, 0.9), c);
        CHECK(rel(l, r) < 1e-9);
    }
}
