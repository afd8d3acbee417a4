#pragma once

#include <string>
#include <vector>

#include "ellsel/params.hpp"

namespace ellsel {

/// log of (p;p)^k (q;q)^k / (2^k k!). The (2 pi i)^{-k} of the usual
/// normalisation is absorbed by the quadrature, which averages over the torus.
Complex kappa_log(int k, const NomePair& nomes);

/// Dixon density in z_1..z_k with parameters ts.
LogProduct dixon_log(std::span<const Complex> z, std::span<const Complex> ts, const NomePair& nomes);
Complex dixon_density(std::span<const Complex> z, std::span<const Complex> ts, const NomePair& nomes);

/// Vertex (Selberg) density in z_1..z_k with parameters ts and t.
LogProduct selberg_vertex_log(std::span<const Complex> z, std::span<const Complex> ts, Complex t,
                              const NomePair& nomes);
Complex selberg_vertex_density(std::span<const Complex> z, std::span<const Complex> ts, Complex t,
                               const NomePair& nomes);

/// Edge density prod_{i,j} Gamma(c z_i^{+-} w_j^{+-}).
LogProduct selberg_edge_log(std::span<const Complex> z, std::span<const Complex> w, Complex c,
                            const NomePair& nomes);
Complex selberg_edge_density(std::span<const Complex> z, std::span<const Complex> w, Complex c,
                             const NomePair& nomes);

/// Parameter list of the vertex density at level r of the A_n density.
std::vector<Complex> an_vertex_params(const ParamSet& ps, int r);

/// Full A_n density; levels[r-1] holds the k_r variables of level r.
LogProduct an_density_log(const std::vector<std::vector<Complex>>& levels, const ParamSet& ps);
Complex an_density(const std::vector<std::vector<Complex>>& levels, const ParamSet& ps);

/// prod_{i=1}^k Gamma(t^i) prod_{r<s} Gamma(t^{i-1} t_r t_s) for six parameters.
/// Throws BalancingError unless t^{2k-2} t_1...t_6 = pq to 1e-12.
Complex selberg_average_normalizer(std::span<const Complex> ts6, Complex t, int k, const NomePair& nomes);

/// Closed-form value of the A_n Selberg integral for a balanced ParamSet.
Complex an_selberg_closed_form(const ParamSet& ps);

/// One factor of an integrand, for reporting and dimension bookkeeping.
struct IntegrandFactor {
    enum class Kind { vertex, edge, interpolation, kernel, gamma };
    Kind kind;
    int level;       // 1-based integration level, 0 for external variables
    int other_level; // edges and kernels: second level (0 = external)
    std::string label;
};

struct IntegrandDescriptor {
    std::vector<int> dims;
    std::vector<IntegrandFactor> factors;

    int total_dimension() const;
    /// Throws DomainError if a factor refers to a level that is not declared.
    void validate() const;
    std::string describe() const;
};

/// Vertex and edge factors of the A_n density.
IntegrandDescriptor an_descriptor(const ParamSet& ps);

} // namespace ellsel
