#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ellsel/errors.hpp"

namespace ellsel {

using Complex = std::complex<double>;

/// Pair of elliptic nomes with the tail threshold used by all truncated products.
struct NomePair {
    Complex p;
    Complex q;
    double eps_tail = 1e-17;

    /// Throws DomainError unless |p|,|q| < 1 and eps_tail in (0, 1e-12].
    void validate() const;
    NomePair swapped() const { return {q, p, eps_tail}; }
};

/// Product of factors kept as a complex logarithm plus a count of exact zeros.
///
/// Dividing by an exact zero makes the count negative, which value() reports
/// as a pole.
class LogProduct {
public:
    void mul(Complex v);
    void div(Complex v);
    void mul_log(Complex lg) { log_ += lg; }
    void div_log(Complex lg) { log_ -= lg; }
    void mul(const LogProduct& o);
    void div(const LogProduct& o);

    int zeros() const { return zeros_; }
    Complex log() const { return log_; }
    /// exp(log) or 0; throws PoleError when more zeros were divided than multiplied.
    Complex value() const;

private:
    Complex log_{0.0, 0.0};
    int zeros_ = 0;
};

/// theta_p(z) = (z;p)_inf (p/z;p)_inf.
Complex theta(Complex z, Complex p, double eps_tail = 1e-17);

/// theta_p(z) as a LogProduct (exact zero when a factor vanishes).
LogProduct theta_log(Complex z, Complex p, double eps_tail = 1e-17);

/// (z;p)_inf, straightforward product.
Complex qpochhammer_inf(Complex z, Complex p, double eps_tail = 1e-17);

/// Elliptic gamma function Gamma_{p,q}(z).
Complex elliptic_gamma(Complex z, const NomePair& nomes);

/// Gamma_{p,q}(z) as a LogProduct; throws PoleError near a pole.
LogProduct elliptic_gamma_log(Complex z, const NomePair& nomes);

/// 1/Gamma_{p,q}(z) as a LogProduct; exact zero at poles of Gamma.
LogProduct elliptic_gamma_recip_log(Complex z, const NomePair& nomes);

/// 1/Gamma_{p,q}(z), entire in z away from 0 and the zeros of Gamma.
Complex elliptic_gamma_recip(Complex z, const NomePair& nomes);

/// Product of Gamma over a sequence, accumulated in log space.
Complex elliptic_gamma_multi(std::span<const Complex> zs, const NomePair& nomes);

/// Gamma(a z^{+-}) = Gamma(a z) Gamma(a / z).
LogProduct gamma_pm(Complex a, Complex z, const NomePair& nomes);

/// 1/(Gamma(z) Gamma(1/z)) = theta_p(z) theta_q(1/z); exact zero at z = 1.
LogProduct gamma_pm_recip_log(Complex z, const NomePair& nomes);

/// Gamma(a z^{+-} w^{+-}), four factors.
LogProduct gamma_pmpm(Complex a, Complex z, Complex w, const NomePair& nomes);

/// (z; q, p)_n = Gamma(q^n z) / Gamma(z), for any integer n.
Complex elliptic_shifted_factorial(Complex z, int n, const NomePair& nomes);

/// Integer power by repeated squaring; negative exponents invert.
Complex ipow(Complex z, int n);

} // namespace ellsel
