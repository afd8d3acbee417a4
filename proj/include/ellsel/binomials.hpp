#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ellsel/symbols.hpp"

namespace ellsel {

/// Elliptic binomial coefficients <lam over mu>_{[a,b]} of a single partition lam
/// with roles fixed by Role, for every mu contained in lam.
struct PartitionTable {
    Partition lam;
    Role role = Role::Q;
    Complex a, b;
    std::vector<Partition> subs; // sub-partitions in enumeration order
    std::vector<Complex> values; // aligned with subs
    double residual = 0.0;       // held-out relative residual
    double condition = 1.0;      // condition number of the scaled system
    int resamples = 0;

    /// Value for mu; zero when mu is not contained in lam.
    Complex at(const Partition& mu) const;
};

/// Solve the single-partition table from the Jackson system at nu = 0.
PartitionTable solve_partition_table(const Partition& lam, Complex a, Complex b, const SymbolContext& ctx,
                                     Role role, std::uint64_t rng_seed);

/// Per-case cache of solved tables keyed by the bit patterns of all inputs.
class BinomialCache {
public:
    explicit BinomialCache(std::uint64_t seed = 0x5eed) : seed_(seed) {}

    const PartitionTable& table(const Partition& lam, Complex a, Complex b, const SymbolContext& ctx, Role role);
    std::size_t size() const;
    /// Largest held-out residual among the cached tables.
    double worst_residual() const;

private:
    using Key = std::vector<std::uint64_t>;
    std::uint64_t seed_;
    mutable std::mutex mutex_;
    std::map<Key, std::unique_ptr<PartitionTable>> tables_;
};

/// Table for a bipartition, assembled from the two component tables.
struct BinomialTable {
    Bipartition lam;
    Complex a, b;
    SymbolContext ctx;
    std::map<Bipartition, Complex> values;
    double residual = 0.0;
};

BinomialTable solve_binomial_table(const Bipartition& lam, Complex a, Complex b, const SymbolContext& ctx,
                                   std::uint64_t rng_seed);

struct BinomialQuery {
    Bipartition lam;
    Bipartition mu;
    Complex a;
    Complex b;
    SymbolContext ctx;
    std::vector<Complex> bracket;
};

/// <lam over mu>_{[a,b](bracket)}; exact delta when b = 1.
Complex binomial(const BinomialQuery& query, BinomialCache& cache);
Complex binomial(const BinomialQuery& query);

/// Plain bipartition binomial <lam over mu>_{[a,b]} from the cache.
Complex binomial_plain(const Bipartition& lam, const Bipartition& mu, Complex a, Complex b, const SymbolContext& ctx,
                       BinomialCache& cache);

/// Relative residual of the elliptic Jackson summation with general nu, e = apq/(bcd).
double jackson_residual(const Bipartition& lam, const Bipartition& nu, Complex a, Complex b, Complex c, Complex d,
                        const SymbolContext& ctx, BinomialCache& cache);

} // namespace ellsel
