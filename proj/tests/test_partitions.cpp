#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ellsel/partitions.hpp"

using namespace ellsel;

namespace {

// Brute-force conjugate by counting cells column by column.
Partition conj_oracle(const Partition& lam)
{
    std::vector<int> out;
    for (int col = 1;; ++col) {
        int cnt = 0;
        for (int v : lam.parts())
            if (v >= col)
                ++cnt;
        if (!cnt)
            break;
        out.push_back(cnt);
    }
    return Partition(out);
}

// Interlacing check written directly from the chain lam1 >= mu1 >= lam2 >= ...
bool strip_oracle(const Partition& lam, const Partition& mu)
{
    int n = std::max(lam.length(), mu.length()) + 1;
    for (int i = 1; i <= n; ++i) {
        if (!(lam[i] >= mu[i]))
            return false;
        if (!(mu[i] >= lam[i + 1]))
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("conjugate examples")
{
    CHECK(conjugate(Partition{7, 4, 2, 1, 1}) == Partition{5, 3, 2, 2, 1, 1, 1});
    CHECK(conjugate(Partition{}) == Partition{});
    CHECK(conjugate(Partition{3, 3}) == Partition{2, 2, 2});
}

TEST_CASE("conjugate involution up to size 6")
{
    for (int n = 0; n <= 6; ++n)
        for (const auto& lam : partitions_of(n)) {
            CHECK(conjugate(lam) == conj_oracle(lam));
            CHECK(conjugate(conjugate(lam)) == lam);
            CHECK(conjugate(lam).size() == lam.size());
        }
}

TEST_CASE("partition counts")
{
    int expected[] = {1, 1, 2, 3, 5, 7, 11};
    for (int n = 0; n <= 6; ++n)
        CHECK(static_cast<int>(partitions_of(n).size()) == expected[n]);
    CHECK(Partition(std::vector<int>{2, 1, 0, 0}) == Partition{2, 1});
    CHECK_THROWS_AS(Partition({1, 2}), DomainError);
}

TEST_CASE("horizontal strips")
{
    CHECK(horizontal_strip(Partition{3, 1}, Partition{2, 1}));
    CHECK(horizontal_strip(Partition{3, 1}, Partition{3, 1}));
    CHECK(horizontal_strip(Partition{3, 1}, Partition{1, 1}));
    CHECK(!horizontal_strip(Partition{2, 2}, Partition{1, 1}));
    CHECK(!horizontal_strip(Partition{1, 1}, Partition{}));
    for (int n = 0; n <= 6; ++n)
        for (const auto& lam : partitions_of(n))
            for (const auto& mu : sub_partitions(lam)) {
                CHECK(horizontal_strip(lam, mu) == strip_oracle(lam, mu));
                auto lc = conjugate(lam), mc = conjugate(mu);
                bool cols = true;
                for (int i = 1; i <= lc.length(); ++i)
                    cols = cols && (lc[i] - mc[i] == 0 || lc[i] - mc[i] == 1);
                CHECK(horizontal_strip(lam, mu) == cols);
            }
}

TEST_CASE("sub-bipartition enumeration")
{
    auto a = sub_bipartitions({Partition{1}, Partition{}});
    REQUIRE(a.size() == 2);
    CHECK(a[0] == Bipartition{});
    CHECK(a[1] == Bipartition{Partition{1}, Partition{}});
    CHECK(sub_bipartitions({Partition{1}, Partition{1}}).size() == 4);
    CHECK(sub_bipartitions({Partition{2, 1}, Partition{}}).size() == 5);

    for (int n1 = 0; n1 <= 4; ++n1)
        for (int n2 = 0; n2 <= 4; ++n2)
            for (const auto& l1 : partitions_of(n1))
                for (const auto& l2 : partitions_of(n2)) {
                    Bipartition lam{l1, l2};
                    std::size_t brute = 0;
                    for (int m1 = 0; m1 <= n1; ++m1)
                        for (int m2 = 0; m2 <= n2; ++m2)
                            for (const auto& a1 : partitions_of(m1))
                                for (const auto& a2 : partitions_of(m2))
                                    if (contains(l1, a1) && contains(l2, a2))
                                        ++brute;
                    auto subs = sub_bipartitions(lam);
                    CHECK(subs.size() == brute);
                    for (std::size_t i = 1; i < subs.size(); ++i)
                        CHECK(subs[i - 1].size() <= subs[i].size());
                    CHECK(std::set<Bipartition>(subs.begin(), subs.end()).size() == subs.size());
                }
}

TEST_CASE("spectral vectors")
{
    auto v0 = spectral_vector({}, 2, 0.3, 0.1, 0.2);
    CHECK(std::abs(v0[0] - 0.3) < 1e-16);
    CHECK(std::abs(v0[1] - 1.0) < 1e-16);
    auto v = spectral_vector({Partition{1}, Partition{2}}, 2, 0.3, 0.1, 0.2);
    CHECK(std::abs(v[0] - 0.1 * 0.04 * 0.3) < 1e-16);
    CHECK(std::abs(v[1] - 1.0) < 1e-16);
    Bipartition lam{Partition{2, 1}, Partition{1, 1, 1}};
    Complex t{0.3, 0.1}, p{0.2, -0.1}, q{0.15, 0.05};
    auto a = spectral_vector(lam, 3, t, p, q);
    auto b = spectral_vector(lam.swapped(), 3, t, q, p);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(a[i] - b[i]) < 1e-16);
    CHECK_THROWS_AS(spectral_vector(lam, 2, t, p, q), DomainError);
}

TEST_CASE("text form")
{
    Bipartition lam{Partition{2, 1}, Partition{1}};
    CHECK(to_string(lam) == "2,1|1");
    CHECK(parse_bipartition("2,1|1") == lam);
    CHECK(to_string(Bipartition{Partition{}, Partition{1}}) == "0|1");
    CHECK(parse_bipartition("0|0") == Bipartition{});
    CHECK(parse_bipartition("1") == Bipartition{Partition{1}, Partition{}});
    CHECK_THROWS_AS(parse_bipartition("1,x|2"), DomainError);
}
