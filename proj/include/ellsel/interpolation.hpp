#pragma once

#include <vector>

#include "ellsel/binomials.hpp"

namespace ellsel {

enum class InterpKind { nonskew, skew, hybrid };

/// Arguments of an interpolation function evaluation.
///
/// nonskew: variables are x_1..x_k.
/// skew:    variables are the bracket list v_1..v_{2k}; nu is the inner shape.
/// hybrid:  the first x_count variables are x's, the rest are v_1..v_{2l}.
struct InterpSpec {
    Bipartition lam;
    Bipartition nu;
    Complex a, b;
    SymbolContext ctx;
    std::vector<Complex> variables;
    InterpKind kind = InterpKind::nonskew;
    int x_count = 0;
};

/// Geometric pole sequence head * ratio^n, n >= 0, tending to zero.
struct PoleSequence {
    Complex head;
    Complex ratio;
};

/// Poles in one x-variable of R*_mu(x;a,b) and of its hybrid variants.
/// The diverging sequences are the reciprocals of these.
struct PoleMap {
    std::vector<PoleSequence> to_zero;

    /// min over sequences of log(radius / |head|); positive iff every
    /// converging sequence lies strictly inside the circle |x| = radius and
    /// every reciprocal sequence strictly outside |x| = 1/radius.
    double log_margin(double radius = 1.0) const;
};

PoleMap pole_map(const Bipartition& mu, Complex b, const SymbolContext& ctx);

/// Poles in one variable of Gamma(b x^+-) R*_mu(x;a,b). In the first row the
/// b^-1 sequences die against zeros of Gamma(b x), leaving b p^-m1 and b q^-m2
/// and, when both parts are nonempty, the isolated corner b p^-m1 q^-m2
/// (ratio 0). Later rows are as in pole_map.
PoleMap integrand_pole_map(const Bipartition& mu, Complex b, const SymbolContext& ctx);

/// R*_lam(x_1..x_k;a,b) through the connection-coefficient sum over mu in lam.
/// Zero when lam has more than k rows in either component.
Complex interp_nonskew(const InterpSpec& spec, BinomialCache& cache, double* max_term = nullptr);

/// R*_{lam/nu}([v_1..v_{2k}];a,b) as the double-binomial sum.
Complex interp_skew(const InterpSpec& spec, BinomialCache& cache, double* max_term = nullptr);

/// R*_lam(x;v;a,b): skew value at [t^{1/2}x^{+-}, t^{1/2}v] with a -> t^{k-1/2}a,
/// b -> t^{1/2}b, divided by Delta0_lam(t^{k-1}a/b | t^{k+l} v_1...v_{2l}).
/// Both square-root branches are evaluated; a mismatch above 1e-8 throws.
Complex interp_hybrid(const InterpSpec& spec, BinomialCache& cache);

/// Relative difference between the two branches of t^{1/2} in interp_hybrid.
double hybrid_branch_discrepancy(const InterpSpec& spec, BinomialCache& cache);

Complex interp(const InterpSpec& spec, BinomialCache& cache);

/// Relative residual of the branching rule, maximised over its skew form
/// (with the bracket list [x_i^{+-}]) and its hybrid form (x's plus (w1, w2)).
double branching_check(const InterpSpec& spec, Complex w1, Complex w2, BinomialCache& cache);

/// Precomputed nonskew or hybrid interpolation function in k free x-variables.
///
/// Both kinds reduce to sum_mu coef_mu prod_i Delta0_mu(pq/tb^2 | pq x_i^{+-}/tb);
/// only the coefficients differ. Evaluation is thread-safe.
class InterpEvaluator {
public:
    static InterpEvaluator nonskew(const Bipartition& lam, int k, Complex a, Complex b, const SymbolContext& ctx,
                                   BinomialCache& cache);
    static InterpEvaluator hybrid(const Bipartition& lam, int k, const std::vector<Complex>& vs, Complex a, Complex b,
                                  const SymbolContext& ctx, BinomialCache& cache);

    Complex operator()(std::span<const Complex> x, double* max_term = nullptr) const;
    int arity() const { return k_; }
    std::size_t terms() const { return coefs_.size(); }

private:
    struct Component {
        Complex shift, nome;
        std::vector<std::pair<int, int>> cells; // (row, column) of lam's cells
        std::vector<Complex> factor;            // shift^{column-1} t^{1-row}
    };
    struct Term {
        Complex coef;
        std::vector<int> cells[2]; // indices into Component::cells
    };
    InterpEvaluator(const Bipartition& lam, int k, Complex b, const SymbolContext& ctx);
    void add_term(const Bipartition& mu, Complex coef);

    int k_ = 0;
    bool zero_ = false;
    SymbolContext ctx_;
    Complex s_;   // pq/(tb)
    Complex den_; // pq/b
    Component comp_[2];
    std::vector<Term> coefs_;
};

} // namespace ellsel
