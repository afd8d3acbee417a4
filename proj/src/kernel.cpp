#include "ellsel/kernel.hpp"

#include "ellsel/densities.hpp"

namespace ellsel {

namespace {

constexpr double kBranchTol = 1e-8;
constexpr double kDelta = 0.05;

struct BranchValue {
    Complex value;
    double estimate;
};

BranchValue k2_branch(const KernelSpec& s, Complex rt, int threads)
{
    const NomePair& nm = s.ctx.nomes;
    const Complex t = s.ctx.t, c = s.c, pq = s.ctx.pq();
    const Complex ci = c / rt; // inner kernel parameter
    const Complex x1 = s.x[0], x2 = s.x[1], y1 = s.y[0], y2 = s.y[1];

    auto rep = evaluate_conditions(kernel_k2_conditions(s, rt), kDelta);
    if (!rep.feasible)
        throw ContourError("k=2 kernel inner contour: " + rep.summary());

    const std::vector<Complex> ts{rt * x1, rt / x1, rt * x2, rt / x2, pq * y2 / (c * rt), pq / (y2 * c * rt)};
    auto f = [&](std::span<const Complex> z) {
        LogProduct v = dixon_log(z, ts, nm);
        v.mul(gamma_pmpm(ci, z[0], y1, nm));
        return v.value();
    };
    QuadResult q = integrate_torus(f, GridSpec{{s.inner_grid}}, threads);

    LogProduct pre;
    pre.mul(gamma_pmpm(c, x1, y2, nm));
    pre.mul(gamma_pmpm(c, x2, y2, nm));
    pre.div(gamma_pmpm(t, x1, x2, nm));
    LogProduct gt = elliptic_gamma_log(t, nm);
    for (int i = 0; i < 3; ++i)
        pre.div(gt);
    pre.div(elliptic_gamma_log(c * c, nm));
    pre.div(elliptic_gamma_log(ci * ci, nm));
    return {pre.value() * q.value, q.doubling_estimate};
}

} // namespace

Complex kernel_k1(Complex c, Complex x, Complex y, const SymbolContext& ctx)
{
    LogProduct v = gamma_pmpm(c, x, y, ctx.nomes);
    v.div(elliptic_gamma_log(ctx.t, ctx.nomes));
    v.div(elliptic_gamma_log(c * c, ctx.nomes));
    return v.value();
}

std::vector<PoleCondition> kernel_k2_conditions(const KernelSpec& s, Complex rt)
{
    const Complex pq = s.ctx.pq();
    std::vector<PoleCondition> out;
    for (std::size_t i = 0; i < 2; ++i) {
        const std::string xi = "x_" + std::to_string(i + 1);
        out.push_back({"t^(1/2) " + xi, rt * s.x[i]});
        out.push_back({"t^(1/2) / " + xi, rt / s.x[i]});
    }
    const Complex ci = s.c / rt;
    out.push_back({"c t^(-1/2) y_1", ci * s.y[0]});
    out.push_back({"c t^(-1/2) / y_1", ci / s.y[0]});
    out.push_back({"pq y_2 / (c t^(1/2))", pq * s.y[1] / (s.c * rt)});
    out.push_back({"pq / (c t^(1/2) y_2)", pq / (s.c * rt * s.y[1])});
    return out;
}

KernelValue kernel_k2(const KernelSpec& spec, int threads)
{
    if (spec.x.size() != 2 || spec.y.size() != 2)
        throw DomainError("kernel_k2 needs two x and two y variables");
    if (!(std::abs(spec.ctx.pq() / spec.ctx.t) < 1.0))
        throw DomainError("kernel_k2 needs |pq/t| < 1");
    const Complex rt = std::sqrt(spec.ctx.t);
    BranchValue a = k2_branch(spec, rt, threads);
    BranchValue b = k2_branch(spec, -rt, threads);
    KernelValue out;
    out.value = a.value;
    out.doubling_estimate = std::max(a.estimate, b.estimate);
    out.branch_discrepancy = std::abs(a.value - b.value) / std::max(std::abs(a.value), 1e-300);
    if (out.branch_discrepancy > kBranchTol)
        throw NumericError("k=2 kernel depends on the branch of t^(1/2): relative difference " +
                           std::to_string(out.branch_discrepancy));
    return out;
}

KernelValue kernel(const KernelSpec& spec, int threads)
{
    if (spec.x.size() != spec.y.size())
        throw DomainError("kernel needs alphabets of equal length");
    switch (spec.x.size()) {
    case 0:
        return {1.0};
    case 1:
        return {kernel_k1(spec.c, spec.x[0], spec.y[0], spec.ctx)};
    case 2:
        return kernel_k2(spec, threads);
    default:
        throw DomainError("kernel evaluation is limited to k <= 2");
    }
}

Complex kernel_factored(std::span<const Complex> x, std::span<const Complex> y, const SymbolContext& ctx)
{
    return selberg_edge_density(x, y, std::sqrt(ctx.pq() / ctx.t), ctx.nomes);
}

double kernel_t_reflection_check(const KernelSpec& spec, int threads)
{
    const NomePair& nm = spec.ctx.nomes;
    const Complex t = spec.ctx.t;
    KernelSpec refl = spec;
    refl.ctx.t = spec.ctx.pq() / t;
    Complex lhs = kernel(refl, threads).value;

    LogProduct r;
    r.mul_log(std::log(kernel(spec, threads).value));
    LogProduct gt = elliptic_gamma_log(t, nm);
    for (std::size_t i = 0; i < 2 * spec.x.size(); ++i)
        r.mul(gt);
    for (std::size_t i = 0; i < spec.x.size(); ++i)
        for (std::size_t j = i + 1; j < spec.x.size(); ++j) {
            r.mul(gamma_pmpm(t, spec.x[i], spec.x[j], nm));
            r.mul(gamma_pmpm(t, spec.y[i], spec.y[j], nm));
        }
    Complex rhs = r.value();
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

} // namespace ellsel
