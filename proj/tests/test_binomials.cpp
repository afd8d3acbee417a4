#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellsel/binomials.hpp"

using namespace ellsel;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Complex rnd(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(lo + (hi - lo) * u(rng), 2 * M_PI * u(rng));
}

SymbolContext random_ctx(std::mt19937_64& rng)
{
    return {{rnd(rng, 0.1, 0.35), rnd(rng, 0.1, 0.35)}, rnd(rng, 0.2, 0.7)};
}

const Bipartition B(const char* s) { return parse_bipartition(s); }

} // namespace

TEST_CASE("empty table")
{
    SymbolContext ctx{{0.1, 0.2}, 0.3};
    auto tab = solve_binomial_table({}, 0.5, 0.7, ctx, 1);
    REQUIRE(tab.values.size() == 1);
    CHECK(tab.values.at({}) == Complex(1.0));
}

TEST_CASE("table endpoints")
{
    std::mt19937_64 rng(31);
    std::vector<Bipartition> shapes{B("1|0"), B("0|1"), B("1|1"), B("2|0"), B("1,1|0"), B("2,1|0"),
                                    B("2|1"), B("1|1,1"), B("3|1"), B("2,2|0"), B("2|2"), B("1,1|1,1")};
    for (const auto& lam : shapes) {
        SymbolContext ctx = random_ctx(rng);
        Complex a = rnd(rng, 0.3, 1.2), b = rnd(rng, 0.3, 1.2);
        auto tab = solve_binomial_table(lam, a, b, ctx, 99);
        Complex zero_end = delta0(lam, a, {b}, ctx);
        Complex top_end = cplus(lam, a, ctx) / cplus(lam, a / b, ctx);
        CHECK(rel(tab.values.at({}), zero_end) < 1e-8);
        CHECK(rel(tab.values.at(lam), top_end) < 1e-8);
        CHECK(tab.residual < 1e-9);
    }
}

TEST_CASE("b = 1 and containment")
{
    SymbolContext ctx{{0.15, 0.25}, 0.4};
    BinomialCache cache(3);
    Bipartition lam = B("2,1|1");
    for (const auto& mu : sub_bipartitions(lam)) {
        Complex v = binomial({lam, mu, Complex(0.6, 0.1), 1.0, ctx, {}}, cache);
        CHECK(v == Complex(mu == lam ? 1.0 : 0.0));
    }
    CHECK(binomial({B("1|0"), B("0|1"), 0.6, 0.8, ctx, {}}, cache) == Complex(0.0));
}

TEST_CASE("b = t strip vanishing")
{
    std::mt19937_64 rng(37);
    for (int s = 0; s < 5; ++s) {
        SymbolContext ctx = random_ctx(rng);
        BinomialCache cache(s);
        Complex a = rnd(rng, 0.3, 1.2);
        for (const auto& lam : {B("1,1|0"), B("2,1|1"), B("1,1|1,1"), B("2,2|0")}) {
            double scale = 0.0;
            for (const auto& mu : sub_bipartitions(lam))
                scale = std::max(scale, std::abs(binomial_plain(lam, mu, a, ctx.t, ctx, cache)));
            for (const auto& mu : sub_bipartitions(lam)) {
                Complex v = binomial_plain(lam, mu, a, ctx.t, ctx, cache);
                if (!horizontal_strip(lam, mu))
                    CHECK(std::abs(v) < 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("bracket reduction")
{
    SymbolContext ctx{{Complex(0.2, 0.05), Complex(0.15, -0.1)}, Complex(0.45, 0.2)};
    BinomialCache cache(5);
    Bipartition lam = B("2|1"), mu = B("1|0");
    Complex a{0.7, 0.3}, b{0.5, -0.4}, v1{0.8, 0.1}, w{0.6, 0.6};
    Complex partner = ctx.pq() * a / (b * w);
    Complex with_pair = binomial({lam, mu, a, b, ctx, {v1, w, partner}}, cache);
    Complex single = binomial({lam, mu, a, b, ctx, {v1}}, cache);
    Complex ratio = delta0(lam, a, {w}, ctx) / delta0(lam, a, {b * w}, ctx);
    CHECK(rel(with_pair, ratio * single) < 1e-11);
}

TEST_CASE("Jackson residuals")
{
    SymbolContext ctx{{Complex(0.2, 0.05), Complex(0.15, -0.1)}, Complex(0.45, 0.2)};
    BinomialCache cache(7);
    Complex a{0.7, 0.3}, b{0.5, -0.4}, c{0.6, 0.2}, d{0.4, 0.5};
    CHECK(jackson_residual(B("1|1"), B("1|1"), a, b, c, d, ctx, cache) < 1e-10);
    CHECK(jackson_residual(B("1|1"), {}, a, b, c, d, ctx, cache) < 1e-9);
    CHECK(jackson_residual(B("2|1"), B("1|0"), a, b, c, d, ctx, cache) < 1e-8);

    std::mt19937_64 rng(41);
    for (int s = 0; s < 10; ++s) {
        SymbolContext cx = random_ctx(rng);
        BinomialCache cc(s);
        auto shapes = bipartitions_of(1 + s % 3);
        Bipartition lam = shapes[s % shapes.size()];
        auto subs = sub_bipartitions(lam);
        Bipartition nu = subs[s % subs.size()];
        CHECK(jackson_residual(lam, nu, rnd(rng, 0.3, 1.0), rnd(rng, 0.3, 1.0), rnd(rng, 0.3, 1.0),
                               rnd(rng, 0.3, 1.0), cx, cc) < 1e-8);
    }
}

TEST_CASE("binomial matrices are mutually inverse")
{
    std::mt19937_64 rng(43);
    for (int s = 0; s < 3; ++s) {
        SymbolContext ctx = random_ctx(rng);
        BinomialCache cache(s + 100);
        Complex a = rnd(rng, 0.4, 1.0), b = rnd(rng, 0.4, 1.0);
        Complex pq = ctx.pq();
        for (const auto& lam : {B("2,1|0"), B("1|1,1"), B("1|1")}) {
            for (const auto& nu : sub_bipartitions(lam)) {
                Complex sum = 0.0;
                for (const auto& mu : sub_bipartitions(lam)) {
                    if (!contains(mu, nu))
                        continue;
                    sum += binomial_plain(lam, mu, a / b, a * b / pq, ctx, cache) *
                           binomial_plain(mu, nu, pq / (b * b), pq / (a * b), ctx, cache);
                }
                CHECK(std::abs(sum - (nu == lam ? 1.0 : 0.0)) < 1e-8);
            }
        }
    }
}
