#pragma once

#include <vector>

#include "ellsel/feasibility.hpp"
#include "ellsel/quadrature.hpp"
#include "ellsel/symbols.hpp"

namespace ellsel {

/// Arguments of the interpolation kernel K_c(x;y;t;p,q); x and y have equal length k <= 2.
struct KernelSpec {
    Complex c;
    std::vector<Complex> x, y;
    SymbolContext ctx;
    int inner_grid = 128;
};

struct KernelValue {
    Complex value;
    double doubling_estimate = 0.0; // inner quadrature, 0 for closed forms
    double branch_discrepancy = 0.0; // relative difference between the two t^{1/2} branches
};

/// Gamma(c x^{+-} y^{+-}) / (Gamma(t) Gamma(c^2)).
Complex kernel_k1(Complex c, Complex x, Complex y, const SymbolContext& ctx);

/// Interior-point conditions of the inner integral of the k=2 branching rule
/// for the given branch of t^{1/2}.
std::vector<PoleCondition> kernel_k2_conditions(const KernelSpec& spec, Complex sqrt_t);

/// k=2 kernel from the branching rule: one inner torus integral of the k=1
/// kernel against a six-parameter Dixon density. Both branches of t^{1/2} are
/// integrated; a relative mismatch above 1e-8 throws NumericError.
/// Throws ContourError when the unit circle is not an admissible inner contour.
KernelValue kernel_k2(const KernelSpec& spec, int threads = 1);

/// Dispatch on k = 0, 1, 2.
KernelValue kernel(const KernelSpec& spec, int threads = 1);

/// prod_{i,j} Gamma(c x_i^{+-} y_j^{+-}) with c = (pq/t)^{1/2}: the kernel on its factoring locus.
Complex kernel_factored(std::span<const Complex> x, std::span<const Complex> y, const SymbolContext& ctx);

/// Relative residual of
///   K_c(x;y;pq/t) = Gamma(t)^{2k} K_c(x;y;t) prod_{i<j} Gamma(t x_i^{+-} x_j^{+-}, t y_i^{+-} y_j^{+-}).
double kernel_t_reflection_check(const KernelSpec& spec, int threads = 1);

} // namespace ellsel
