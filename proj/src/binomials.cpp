#include "ellsel/binomials.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <random>

namespace ellsel {

namespace {

constexpr double kMaxCondition = 1e8;
constexpr int kMaxResamples = 5;
constexpr int kHeldOut = 5;
constexpr double kGoodResidual = 1e-11;

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void push_bits(std::vector<std::uint64_t>& key, Complex z)
{
    key.push_back(std::bit_cast<std::uint64_t>(z.real()));
    key.push_back(std::bit_cast<std::uint64_t>(z.imag()));
}

std::vector<std::uint64_t> make_key(const Partition& lam, Complex a, Complex b, const SymbolContext& ctx, Role role)
{
    std::vector<std::uint64_t> key;
    key.push_back(role == Role::P ? 1 : 2);
    for (int part : lam.parts())
        key.push_back(static_cast<std::uint64_t>(part));
    key.push_back(~0ULL);
    for (Complex z : {a, b, ctx.t, ctx.nomes.p, ctx.nomes.q})
        push_bits(key, z);
    return key;
}

std::uint64_t hash_key(const std::vector<std::uint64_t>& key)
{
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::uint64_t k : key)
        h = splitmix(h ^ k);
    return h;
}

// One equation of the nu = 0 system: coefficients per sub-partition and right-hand side.
struct Equation {
    std::vector<Complex> row;
    Complex rhs;
};

class Sampler {
public:
    Sampler(const Partition& lam, const std::vector<Partition>& subs, Complex a, Complex b, const SymbolContext& ctx,
            Role role, std::uint64_t seed)
        : lam_(lam), subs_(subs), a_(a), b_(b), ctx_(ctx), role_(role), rng_(seed)
    {
    }

    Equation draw()
    {
        for (int attempt = 0;; ++attempt) {
            Complex c = random_point(), d = random_point();
            try {
                return equation(c, d);
            } catch (const PoleError&) {
                if (attempt > 100)
                    throw;
            }
        }
    }

private:
    Complex random_point()
    {
        std::uniform_real_distribution<double> mod(0.3, 0.9), arg(0.0, 2 * M_PI);
        double r = mod(rng_);
        return std::polar(r, arg(rng_));
    }

    Equation equation(Complex c, Complex d)
    {
        Complex e = a_ * ctx_.pq() / (b_ * c * d);
        Complex left[] = {d, e, c / b_};
        Complex right[] = {b_ * d, b_ * e, c};
        Equation eq;
        eq.row.reserve(subs_.size());
        for (const auto& mu : subs_)
            eq.row.push_back(delta0(mu, a_ / b_, left, ctx_, role_));
        eq.rhs = delta0(lam_, a_, right, ctx_, role_);
        return eq;
    }

    const Partition& lam_;
    const std::vector<Partition>& subs_;
    Complex a_, b_;
    const SymbolContext& ctx_;
    Role role_;
    std::mt19937_64 rng_;
};

double equation_residual(const Equation& eq, const std::vector<Complex>& x)
{
    Complex lhs = 0.0;
    double scale = std::abs(eq.rhs);
    for (std::size_t i = 0; i < x.size(); ++i) {
        Complex term = eq.row[i] * x[i];
        lhs += term;
        scale = std::max(scale, std::abs(term));
    }
    return std::abs(lhs - eq.rhs) / std::max(scale, 1e-300);
}

} // namespace

Complex PartitionTable::at(const Partition& mu) const
{
    auto it = std::lower_bound(subs.begin(), subs.end(), mu, [](const Partition& x, const Partition& y) {
        if (x.size() != y.size())
            return x.size() < y.size();
        return x < y;
    });
    if (it == subs.end() || *it != mu)
        return 0.0;
    return values[static_cast<std::size_t>(it - subs.begin())];
}

PartitionTable solve_partition_table(const Partition& lam, Complex a, Complex b, const SymbolContext& ctx, Role role,
                                     std::uint64_t rng_seed)
{
    PartitionTable tab;
    tab.lam = lam;
    tab.role = role;
    tab.a = a;
    tab.b = b;
    tab.subs = sub_partitions(lam);
    const std::size_t n = tab.subs.size();
    if (lam.empty()) {
        tab.values = {1.0};
        return tab;
    }
    if (b == Complex(1.0)) {
        tab.values.assign(n, 0.0);
        tab.values.back() = 1.0;
        return tab;
    }

    Sampler sampler(lam, tab.subs, a, b, ctx, role, rng_seed);
    const std::size_t m = 2 * n;
    double cond = 0.0;
    bool solved = false;
    PartitionTable best = tab;
    for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
        Eigen::MatrixXcd A(m, n);
        Eigen::VectorXcd y(m);
        for (std::size_t r = 0; r < m; ++r) {
            Equation eq = sampler.draw();
            double s = std::abs(eq.rhs);
            for (Complex v : eq.row)
                s = std::max(s, std::abs(v));
            for (std::size_t j = 0; j < n; ++j)
                A(r, j) = eq.row[j] / s;
            y(r) = eq.rhs / s;
        }
        Eigen::VectorXd colscale = A.colwise().norm().transpose();
        for (std::size_t j = 0; j < n; ++j) {
            if (colscale(j) == 0.0)
                colscale(j) = 1.0;
            A.col(j) /= colscale(j);
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
        const auto& sv = svd.singularValues();
        cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
        if (cond > kMaxCondition)
            continue;
        Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(y);
        tab.values.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            tab.values[j] = sol(j) / colscale(j);
        tab.condition = cond;
        tab.resamples = attempt;
        double worst = 0.0;
        for (int h = 0; h < kHeldOut; ++h)
            worst = std::max(worst, equation_residual(sampler.draw(), tab.values));
        tab.residual = worst;
        if (!solved || tab.residual < best.residual)
            best = tab;
        solved = true;
        // draws differ in how well they pin down the smallest coefficients
        if (best.residual < kGoodResidual)
            break;
    }
    if (solved)
        return best;
    throw ConditioningError("binomial table for " + to_string(lam) + ": condition number " + std::to_string(cond) +
                            " after " + std::to_string(kMaxResamples) + " resamples");
}

const PartitionTable& BinomialCache::table(const Partition& lam, Complex a, Complex b, const SymbolContext& ctx,
                                           Role role)
{
    Key key = make_key(lam, a, b, ctx, role);
    {
        std::lock_guard lock(mutex_);
        auto it = tables_.find(key);
        if (it != tables_.end())
            return *it->second;
    }
    auto solved = std::make_unique<PartitionTable>(solve_partition_table(lam, a, b, ctx, role, splitmix(seed_ ^ hash_key(key))));
    std::lock_guard lock(mutex_);
    auto [it, inserted] = tables_.emplace(std::move(key), std::move(solved));
    return *it->second;
}

std::size_t BinomialCache::size() const
{
    std::lock_guard lock(mutex_);
    return tables_.size();
}

double BinomialCache::worst_residual() const
{
    std::lock_guard lock(mutex_);
    double w = 0.0;
    for (const auto& [k, tab] : tables_)
        w = std::max(w, tab->residual);
    return w;
}

BinomialTable solve_binomial_table(const Bipartition& lam, Complex a, Complex b, const SymbolContext& ctx,
                                   std::uint64_t rng_seed)
{
    BinomialCache cache(rng_seed);
    const PartitionTable& first = cache.table(lam.first, a, b, ctx, Role::P);
    const PartitionTable& second = cache.table(lam.second, a, b, ctx, Role::Q);
    BinomialTable out{lam, a, b, ctx, {}, std::max(first.residual, second.residual)};
    for (std::size_t i = 0; i < first.subs.size(); ++i)
        for (std::size_t j = 0; j < second.subs.size(); ++j)
            out.values[Bipartition{first.subs[i], second.subs[j]}] = first.values[i] * second.values[j];
    return out;
}

Complex binomial_plain(const Bipartition& lam, const Bipartition& mu, Complex a, Complex b, const SymbolContext& ctx,
                       BinomialCache& cache)
{
    if (!contains(lam, mu))
        return 0.0;
    if (b == Complex(1.0))
        return lam == mu ? 1.0 : 0.0;
    return cache.table(lam.first, a, b, ctx, Role::P).at(mu.first) *
           cache.table(lam.second, a, b, ctx, Role::Q).at(mu.second);
}

Complex binomial(const BinomialQuery& query, BinomialCache& cache)
{
    const auto& [lam, mu, a, b, ctx, bracket] = query;
    if (!contains(lam, mu))
        return 0.0;
    if (b == Complex(1.0))
        return lam == mu ? 1.0 : 0.0;
    Complex plain = binomial_plain(lam, mu, a, b, ctx, cache);
    if (bracket.empty())
        return plain;
    LogProduct ratio = delta0_log(lam, a, bracket, ctx);
    ratio.div(delta0_log(mu, a / b, bracket, ctx));
    return plain * ratio.value();
}

Complex binomial(const BinomialQuery& query)
{
    BinomialCache cache;
    return binomial(query, cache);
}

double jackson_residual(const Bipartition& lam, const Bipartition& nu, Complex a, Complex b, Complex c, Complex d,
                        const SymbolContext& ctx, BinomialCache& cache)
{
    Complex e = a * ctx.pq() / (b * c * d);
    Complex de[] = {d, e};
    Complex lhs = 0.0;
    for (const auto& mu : sub_bipartitions(lam)) {
        if (!contains(mu, nu))
            continue;
        lhs += delta0(mu, a / b, de, ctx) * binomial_plain(lam, mu, a, b, ctx, cache) *
               binomial_plain(mu, nu, a / b, c / b, ctx, cache);
    }
    Complex rhs = binomial({lam, nu, a, c, ctx, {b * d, b * e}}, cache);
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

} // namespace ellsel
