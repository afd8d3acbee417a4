#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ellsel/elliptic.hpp"

namespace ellsel {

/// Product grid on the unit torus. Point j of dimension r sits at
/// exp(i(2 pi j / N_r + offset_r)); a negative phase_offset selects the
/// default half-step pi / N_r in every dimension.
struct GridSpec {
    std::vector<int> dims;
    double phase_offset = -1.0;
    std::size_t budget = 20'000'000;

    std::size_t evals() const;
    double offset(std::size_t r) const;
    /// Throws DomainError for empty/odd/nonpositive counts, BudgetError over budget.
    void validate() const;
    GridSpec doubled() const;
    std::string label() const; // "128x128"
};

struct QuadResult {
    Complex value;
    double doubling_estimate = 0.0; // |I(N) - I(N/2)| / max(|I(N)|, 1e-300)
    std::size_t evals = 0;          // integrand calls, including the coarse rule
    long runtime_ms = 0;
    bool budget_hit = false;
    GridSpec grid;
};

/// f receives the point (z_1..z_d); it must be safe to call concurrently.
using TorusIntegrand = std::function<Complex(std::span<const Complex>)>;

/// Thread count: ELLSEL_THREADS if set, else the hardware concurrency.
int default_threads();

/// (2 pi i)^{-d} times the torus integral of f dz_1/z_1 ... dz_d/z_d by the
/// product trapezoid rule. The result is bit-identical for any thread count:
/// samples are summed in fixed chunks and the chunk sums reduced pairwise.
/// The coarse value I(N/2) is the even-index subgrid for an explicit offset
/// and a separate half-step N/2 grid for the default offset.
/// Throws NumericError naming the grid index of a non-finite sample.
QuadResult integrate_torus(const TorusIntegrand& f, const GridSpec& grid, int threads = 0);

/// Doubles every count until doubling_estimate <= target_rel or the next grid
/// would exceed max_budget (budget_hit is then set). history, when given,
/// receives every grid evaluated.
QuadResult integrate_adaptive(const TorusIntegrand& f, const GridSpec& start, double target_rel,
                              std::size_t max_budget, int threads = 0, std::vector<QuadResult>* history = nullptr);

/// Columns grid, value_re, value_im, doubling_estimate, evals, runtime_ms.
std::string convergence_csv(const std::vector<QuadResult>& rows);

} // namespace ellsel
