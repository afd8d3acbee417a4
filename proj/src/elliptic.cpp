#include "ellsel/elliptic.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ellsel {

namespace {

constexpr double kPoleRadius = 1e-10;

std::string fmt(Complex z)
{
    return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

struct ThetaParts {
    LogProduct value;
    double min_factor; // smallest |1 - x| among the two leading factors
};

// theta_p(z) after reducing z to the annulus |p| <= |w| <= 1 by quasi-periodicity.
ThetaParts theta_reduced(Complex z, Complex p, double eps)
{
    if (z == 0.0)
        throw DomainError("theta: z = 0");
    double lp = std::log(std::abs(p));
    double u = std::log(std::abs(z)) / lp;
    int m = static_cast<int>(std::lround(u - 0.5));
    Complex w = z * ipow(p, -m);

    ThetaParts out{{}, 0.0};
    if (m != 0) {
        // theta(p^m w) = (-1)^m p^{-m(m-1)/2} w^{-m} theta(w)
        double tri = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
        out.value.mul_log(Complex(0.0, M_PI * m) - tri * std::log(p) - static_cast<double>(m) * std::log(w));
    }

    Complex pw = p / w;
    double scale = std::max(std::abs(w), std::abs(pw));
    Complex a = 1.0 - w, b = 1.0 - pw;
    out.min_factor = std::min(std::abs(a), std::abs(b));
    if (a == 0.0 || b == 0.0) {
        out.value.mul(0.0);
        return out;
    }
    Complex prod = a * b;
    Complex pk = p;
    double apk = std::abs(p);
    bool guard = false;
    for (int k = 1; k < 100000; ++k) {
        prod *= (1.0 - pk * w) * (1.0 - pk * pw);
        if (apk * scale < eps) {
            if (guard)
                break;
            guard = true;
        }
        pk *= p;
        apk *= std::abs(p);
    }
    out.value.mul(prod);
    return out;
}

// Coefficients 1/(n (1-p^n)(1-q^n)) of the logarithmic series, cached per thread.
struct SeriesCache {
    Complex p{2.0}, q{2.0};
    std::vector<Complex> coef; // coef[n-1]

    const Complex* get(Complex pp, Complex qq, std::size_t n)
    {
        if (pp != p || qq != q) {
            p = pp;
            q = qq;
            coef.clear();
        }
        if (coef.size() < n) {
            std::size_t start = coef.size();
            Complex pn = ipow(p, static_cast<int>(start + 1));
            Complex qn = ipow(q, static_cast<int>(start + 1));
            for (std::size_t k = start + 1; k <= n; ++k) {
                coef.push_back(1.0 / (static_cast<double>(k) * (1.0 - pn) * (1.0 - qn)));
                pn *= p;
                qn *= q;
            }
        }
        return coef.data();
    }
};

thread_local SeriesCache series_cache;

// log Gamma(w) for |pq| < |w| < 1 via sum_n (w^n - (pq/w)^n) / (n (1-p^n)(1-q^n)).
Complex log_gamma_series(Complex w, const NomePair& nm)
{
    Complex pq = nm.p * nm.q;
    Complex v = pq / w;
    double r = std::max(std::abs(w), std::abs(v));
    if (r >= 1.0)
        throw DomainError("elliptic gamma series outside annulus");
    std::size_t n = static_cast<std::size_t>(std::ceil(std::log(nm.eps_tail) / std::log(r))) + 2;
    const Complex* c = series_cache.get(nm.p, nm.q, n);
    Complex sum = 0.0, wn = w, vn = v;
    for (std::size_t k = 0; k < n; ++k) {
        sum += (wn - vn) * c[k];
        wn *= w;
        vn *= v;
    }
    return sum;
}

// Gamma(z) (invert=false) or 1/Gamma(z) (invert=true) as a LogProduct.
LogProduct gamma_impl(Complex z, const NomePair& nm, bool invert)
{
    if (z == 0.0)
        throw DomainError("elliptic gamma: z = 0");
    bool p_larger = std::abs(nm.p) >= std::abs(nm.q);
    Complex s = p_larger ? nm.p : nm.q;
    Complex o = p_larger ? nm.q : nm.p;
    double target = 0.5 * std::log(std::abs(nm.p * nm.q));
    int m = static_cast<int>(std::lround((target - std::log(std::abs(z))) / std::log(std::abs(s))));
    Complex w = z * ipow(s, m);

    LogProduct out;
    Complex lg = log_gamma_series(w, nm);
    if (invert)
        out.div_log(lg);
    else
        out.mul_log(lg);

    // Gamma(s x) = theta_o(x) Gamma(x)
    if (m > 0) {
        Complex x = z;
        for (int i = 0; i < m; ++i) {
            ThetaParts th = theta_reduced(x, o, nm.eps_tail);
            if (!invert && th.min_factor < kPoleRadius)
                throw PoleError("elliptic gamma: pole at z=" + fmt(z));
            if (invert)
                out.mul(th.value);
            else
                out.div(th.value);
            x *= s;
        }
    } else if (m < 0) {
        Complex x = w;
        for (int i = 0; i < -m; ++i) {
            ThetaParts th = theta_reduced(x, o, nm.eps_tail);
            if (invert && th.min_factor < kPoleRadius)
                throw PoleError("reciprocal elliptic gamma: zero of gamma at z=" + fmt(z));
            if (invert)
                out.div(th.value);
            else
                out.mul(th.value);
            x *= s;
        }
    }
    return out;
}

} // namespace

void NomePair::validate() const
{
    if (!(std::abs(p) < 1.0) || !(std::abs(q) < 1.0))
        throw DomainError("nomes must satisfy |p|,|q| < 1");
    if (p == 0.0 || q == 0.0)
        throw DomainError("nomes must be nonzero");
    if (!(eps_tail > 0.0 && eps_tail <= 1e-12))
        throw DomainError("eps_tail must lie in (0, 1e-12]");
}

void LogProduct::mul(Complex v)
{
    if (v == 0.0)
        ++zeros_;
    else
        log_ += std::log(v);
}

void LogProduct::div(Complex v)
{
    if (v == 0.0)
        --zeros_;
    else
        log_ -= std::log(v);
}

void LogProduct::mul(const LogProduct& o)
{
    log_ += o.log_;
    zeros_ += o.zeros_;
}

void LogProduct::div(const LogProduct& o)
{
    log_ -= o.log_;
    zeros_ -= o.zeros_;
}

Complex LogProduct::value() const
{
    if (zeros_ < 0)
        throw PoleError("division by an exact zero in product");
    if (zeros_ > 0)
        return 0.0;
    return std::exp(log_);
}

Complex ipow(Complex z, int n)
{
    if (n < 0)
        return 1.0 / ipow(z, -n);
    Complex r = 1.0;
    while (n) {
        if (n & 1)
            r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

LogProduct theta_log(Complex z, Complex p, double eps_tail)
{
    if (!(std::abs(p) < 1.0) || p == 0.0)
        throw DomainError("theta: need 0 < |p| < 1");
    return theta_reduced(z, p, eps_tail).value;
}

Complex theta(Complex z, Complex p, double eps_tail) { return theta_log(z, p, eps_tail).value(); }

Complex qpochhammer_inf(Complex z, Complex p, double eps_tail)
{
    if (!(std::abs(p) < 1.0))
        throw DomainError("qpochhammer: |p| >= 1");
    Complex r = 1.0, pk = 1.0;
    bool guard = false;
    for (int k = 0; k < 100000; ++k) {
        r *= 1.0 - pk * z;
        if (std::abs(pk * z) < eps_tail) {
            if (guard)
                break;
            guard = true;
        }
        pk *= p;
    }
    return r;
}

LogProduct elliptic_gamma_log(Complex z, const NomePair& nomes) { return gamma_impl(z, nomes, false); }

LogProduct elliptic_gamma_recip_log(Complex z, const NomePair& nomes) { return gamma_impl(z, nomes, true); }

Complex elliptic_gamma(Complex z, const NomePair& nomes) { return gamma_impl(z, nomes, false).value(); }

Complex elliptic_gamma_recip(Complex z, const NomePair& nomes) { return gamma_impl(z, nomes, true).value(); }

Complex elliptic_gamma_multi(std::span<const Complex> zs, const NomePair& nomes)
{
    LogProduct acc;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        try {
            acc.mul(elliptic_gamma_log(zs[i], nomes));
        } catch (const PoleError& e) {
            throw PoleError(std::string(e.what()) + " (argument index " + std::to_string(i) + ")");
        }
    }
    return acc.value();
}

LogProduct gamma_pm(Complex a, Complex z, const NomePair& nomes)
{
    LogProduct r = elliptic_gamma_log(a * z, nomes);
    r.mul(elliptic_gamma_log(a / z, nomes));
    return r;
}

LogProduct gamma_pm_recip_log(Complex z, const NomePair& nomes)
{
    LogProduct r = theta_log(z, nomes.p, nomes.eps_tail);
    r.mul(theta_log(1.0 / z, nomes.q, nomes.eps_tail));
    return r;
}

LogProduct gamma_pmpm(Complex a, Complex z, Complex w, const NomePair& nomes)
{
    LogProduct r = gamma_pm(a * w, z, nomes);
    r.mul(gamma_pm(a / w, z, nomes));
    return r;
}

Complex elliptic_shifted_factorial(Complex z, int n, const NomePair& nomes)
{
    LogProduct r;
    if (n >= 0) {
        Complex x = z;
        for (int i = 0; i < n; ++i) {
            r.mul(theta_log(x, nomes.p, nomes.eps_tail));
            x *= nomes.q;
        }
    } else {
        Complex x = z * ipow(nomes.q, n);
        for (int i = 0; i < -n; ++i) {
            r.div(theta_log(x, nomes.p, nomes.eps_tail));
            x *= nomes.q;
        }
    }
    return r.value();
}

} // namespace ellsel
