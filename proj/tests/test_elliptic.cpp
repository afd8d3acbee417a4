#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellsel/elliptic.hpp"

using namespace ellsel;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Direct truncated products, written independently of the library code.
Complex theta_oracle(Complex z, Complex p, int terms = 60)
{
    Complex r = 1.0;
    Complex pk = 1.0;
    for (int k = 0; k < terms; ++k) {
        r *= (1.0 - pk * z) * (1.0 - pk * p / z);
        pk *= p;
    }
    return r;
}

Complex gamma_oracle(Complex z, Complex p, Complex q, int terms = 80)
{
    Complex num = 1.0, den = 1.0;
    Complex pi = 1.0;
    for (int i = 0; i < terms; ++i) {
        Complex pij = pi;
        for (int j = 0; j < terms; ++j) {
            num *= 1.0 - pij * p * q / z;
            den *= 1.0 - pij * z;
            pij *= q;
        }
        pi *= p;
    }
    return num / den;
}

Complex random_in_annulus(std::mt19937_64& rng, double rmin, double rmax)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = std::exp(std::log(rmin) + u(rng) * (std::log(rmax) - std::log(rmin)));
    return std::polar(r, 2 * M_PI * u(rng));
}

} // namespace

TEST_CASE("theta quasi-periodicity and zero")
{
    Complex z{0.4, 0.1}, p = 0.2;
    CHECK(rel(theta(p * z, p), -theta(z, p) / z) < 1e-13);
    CHECK(std::abs(theta(1.0, p)) == 0.0);
    CHECK(std::abs(theta(1.0, Complex(0.3, 0.2))) == 0.0);
}

TEST_CASE("theta against direct product")
{
    CHECK(rel(theta(0.5, 0.1), theta_oracle(0.5, 0.1)) < 1e-15);
    std::mt19937_64 rng(7);
    for (int s = 0; s < 200; ++s) {
        Complex p = random_in_annulus(rng, 0.05, 0.5);
        Complex z = random_in_annulus(rng, 0.2, 5.0);
        CHECK(rel(theta(z, p), theta_oracle(z, p, 80)) < 1e-12);
    }
}

TEST_CASE("theta symmetry under inversion")
{
    std::mt19937_64 rng(11);
    for (int s = 0; s < 100; ++s) {
        Complex p = random_in_annulus(rng, 0.05, 0.4);
        Complex z = random_in_annulus(rng, 0.2, 5.0);
        CHECK(rel(theta(1.0 / z, p), -theta(z, p) / z) < 1e-12);
    }
}

TEST_CASE("gamma against double product")
{
    std::mt19937_64 rng(3);
    for (int s = 0; s < 100; ++s) {
        Complex p = random_in_annulus(rng, 0.05, 0.4);
        Complex q = random_in_annulus(rng, 0.05, 0.4);
        Complex z = random_in_annulus(rng, 0.2, 5.0);
        NomePair nm{p, q};
        CHECK(rel(elliptic_gamma(z, nm), gamma_oracle(z, p, q)) < 1e-12);
    }
}

TEST_CASE("gamma reflection, symmetry, functional equation")
{
    NomePair nm{0.15, 0.25};
    Complex z{0.3, -0.2};
    CHECK(rel(elliptic_gamma(z, nm) * elliptic_gamma(nm.p * nm.q / z, nm), 1.0) < 1e-12);
    CHECK(rel(elliptic_gamma(z, nm), elliptic_gamma(z, nm.swapped())) < 1e-13);

    NomePair nm2{0.1, 0.2};
    CHECK(rel(elliptic_gamma(0.1 * 0.5, nm2), theta(0.5, 0.2) * elliptic_gamma(0.5, nm2)) < 1e-13);

    std::mt19937_64 rng(5);
    for (int s = 0; s < 1000; ++s) {
        Complex p = random_in_annulus(rng, 0.02, 0.4);
        Complex q = random_in_annulus(rng, 0.02, 0.4);
        Complex w = random_in_annulus(rng, 0.2, 5.0);
        NomePair n3{p, q};
        CHECK(rel(elliptic_gamma(w, n3) * elliptic_gamma(p * q / w, n3), 1.0) < 1e-11);
        CHECK(rel(elliptic_gamma(w, n3), elliptic_gamma(w, n3.swapped())) < 1e-12);
        CHECK(std::abs(theta(p * w, p) + theta(w, p) / w) <= 1e-12 * std::abs(theta(w, p)));
    }
}

TEST_CASE("gamma poles and reciprocal")
{
    NomePair nm{0.2, 0.3};
    CHECK_THROWS_AS(elliptic_gamma(1.0, nm), PoleError);
    CHECK_THROWS_AS(elliptic_gamma(1.0 / 0.2, nm), PoleError);
    CHECK_THROWS_AS(elliptic_gamma(0.0, nm), DomainError);
    CHECK(std::abs(elliptic_gamma_recip(1.0, nm)) == 0.0);
    Complex z{0.7, 0.4};
    CHECK(rel(elliptic_gamma_recip(z, nm) * elliptic_gamma(z, nm), 1.0) < 1e-14);
    CHECK_THROWS_AS(NomePair({1.1, 0.2}).validate(), DomainError);
}

TEST_CASE("gamma multi")
{
    NomePair nm{0.1, 0.2};
    CHECK(elliptic_gamma_multi({}, nm) == Complex(1.0));
    std::vector<Complex> zs{0.3, 0.4, 0.5};
    Complex prod = elliptic_gamma(0.3, nm) * elliptic_gamma(0.4, nm) * elliptic_gamma(0.5, nm);
    CHECK(rel(elliptic_gamma_multi(zs, nm), prod) < 1e-13);
    std::vector<Complex> refl{Complex(0.3, 0.1), 0.02 / Complex(0.3, 0.1)};
    CHECK(rel(elliptic_gamma_multi(refl, nm), 1.0) < 1e-13);
}

TEST_CASE("elliptic shifted factorial")
{
    NomePair nm{0.1, 0.2};
    Complex z = 0.4;
    CHECK(rel(elliptic_shifted_factorial(z, 0, nm), 1.0) < 1e-15);
    Complex direct = theta(z, 0.1) * theta(z * 0.2, 0.1) * theta(z * 0.04, 0.1);
    CHECK(rel(elliptic_shifted_factorial(z, 3, nm), direct) < 1e-12);
    CHECK(rel(elliptic_shifted_factorial(z, -1, nm), 1.0 / theta(z / 0.2, 0.1)) < 1e-12);
}

TEST_CASE("reciprocal gamma pair as thetas")
{
    NomePair nm{Complex(0.2, 0.1), Complex(-0.15, 0.2)};
    for (Complex z : {Complex(0.7, 0.4), Complex(1.3, -0.2), Complex(-0.5, 0.9)}) {
        Complex want = elliptic_gamma_recip(z, nm) * elliptic_gamma_recip(1.0 / z, nm);
        CHECK(std::abs(gamma_pm_recip_log(z, nm).value() - want) < 1e-12 * std::abs(want));
    }
    CHECK(gamma_pm_recip_log(1.0, nm).value() == Complex(0.0));
}
