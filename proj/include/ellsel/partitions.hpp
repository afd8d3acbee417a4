#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

#include "ellsel/elliptic.hpp"

namespace ellsel {

/// Integer partition stored without trailing zeroes.
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int size() const;
    bool empty() const { return parts_.empty(); }
    /// lambda_i with 1-based i; zero beyond the length.
    int operator[](int i) const { return i >= 1 && i <= length() ? parts_[i - 1] : 0; }

    auto operator<=>(const Partition&) const = default;

private:
    std::vector<int> parts_;
};

Partition conjugate(const Partition& lam);

/// mu_i <= lam_i for all i.
bool contains(const Partition& lam, const Partition& mu);

/// lam_1 >= mu_1 >= lam_2 >= mu_2 >= ...
bool horizontal_strip(const Partition& lam, const Partition& mu);

/// All mu contained in lam, ordered by size then lexicographically.
std::vector<Partition> sub_partitions(const Partition& lam);

/// All partitions of n, lexicographic order.
std::vector<Partition> partitions_of(int n);

std::string to_string(const Partition& lam);

/// Pair of partitions; first is the p-component, second the q-component.
struct Bipartition {
    Partition first;
    Partition second;

    int size() const { return first.size() + second.size(); }
    int length() const { return std::max(first.length(), second.length()); }
    bool empty() const { return first.empty() && second.empty(); }
    Bipartition swapped() const { return {second, first}; }

    auto operator<=>(const Bipartition&) const = default;
};

bool contains(const Bipartition& lam, const Bipartition& mu);
bool horizontal_strip(const Bipartition& lam, const Bipartition& mu);

/// All mu contained in lam, ordered by total size then lexicographically.
std::vector<Bipartition> sub_bipartitions(const Bipartition& lam);

/// All bipartitions of total size n.
std::vector<Bipartition> bipartitions_of(int n);

/// Entries p^{lam1_i} q^{lam2_i} t^{n-i}, i = 1..n.
std::vector<Complex> spectral_vector(const Bipartition& lam, int n, Complex t, Complex p, Complex q);

/// Text form "2,1|1"; an empty component is rendered as "0".
std::string to_string(const Bipartition& lam);
Bipartition parse_bipartition(const std::string& text);

} // namespace ellsel
