#include "ellsel/partitions.hpp"

#include <algorithm>
#include <sstream>

namespace ellsel {

namespace {

void normalize(std::vector<int>& v)
{
    while (!v.empty() && v.back() == 0)
        v.pop_back();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0)
            throw DomainError("partition with a negative part");
        if (i && v[i] > v[i - 1])
            throw DomainError("partition parts must be weakly decreasing");
    }
}

void enumerate_below(const Partition& lam, int row, int bound, std::vector<int>& cur, std::vector<Partition>& out)
{
    if (row > lam.length()) {
        out.emplace_back(cur);
        return;
    }
    int hi = std::min(lam[row], bound);
    for (int v = 0; v <= hi; ++v) {
        cur.push_back(v);
        enumerate_below(lam, row + 1, v, cur, out);
        cur.pop_back();
    }
}

void enumerate_size(int n, int maxpart, std::vector<int>& cur, std::vector<Partition>& out)
{
    if (n == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int v = 1; v <= std::min(n, maxpart); ++v) {
        cur.push_back(v);
        enumerate_size(n - v, v, cur, out);
        cur.pop_back();
    }
}

Partition parse_partition(const std::string& s)
{
    if (s.empty() || s == "0")
        return {};
    std::vector<int> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789 ") != std::string::npos)
            throw DomainError("bad partition text: " + s);
        parts.push_back(std::stoi(item));
    }
    return Partition(parts);
}

} // namespace

Partition::Partition(std::initializer_list<int> parts) : parts_(parts) { normalize(parts_); }

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) { normalize(parts_); }

int Partition::size() const
{
    int s = 0;
    for (int v : parts_)
        s += v;
    return s;
}

Partition conjugate(const Partition& lam)
{
    std::vector<int> out(lam.empty() ? 0 : lam[1], 0);
    for (int v : lam.parts())
        for (int j = 0; j < v; ++j)
            ++out[j];
    return Partition(out);
}

bool contains(const Partition& lam, const Partition& mu)
{
    if (mu.length() > lam.length())
        return false;
    for (int i = 1; i <= mu.length(); ++i)
        if (mu[i] > lam[i])
            return false;
    return true;
}

bool horizontal_strip(const Partition& lam, const Partition& mu)
{
    if (!contains(lam, mu))
        return false;
    for (int i = 1; i <= lam.length(); ++i)
        if (mu[i] < lam[i + 1])
            return false;
    return true;
}

std::vector<Partition> sub_partitions(const Partition& lam)
{
    std::vector<Partition> out;
    std::vector<int> cur;
    enumerate_below(lam, 1, lam.empty() ? 0 : lam[1], cur, out);
    std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return out;
}

std::vector<Partition> partitions_of(int n)
{
    std::vector<Partition> out;
    std::vector<int> cur;
    enumerate_size(n, n, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const Partition& lam)
{
    if (lam.empty())
        return "0";
    std::string s;
    for (int i = 1; i <= lam.length(); ++i) {
        if (i > 1)
            s += ",";
        s += std::to_string(lam[i]);
    }
    return s;
}

bool contains(const Bipartition& lam, const Bipartition& mu)
{
    return contains(lam.first, mu.first) && contains(lam.second, mu.second);
}

bool horizontal_strip(const Bipartition& lam, const Bipartition& mu)
{
    return horizontal_strip(lam.first, mu.first) && horizontal_strip(lam.second, mu.second);
}

std::vector<Bipartition> sub_bipartitions(const Bipartition& lam)
{
    std::vector<Bipartition> out;
    for (const auto& a : sub_partitions(lam.first))
        for (const auto& b : sub_partitions(lam.second))
            out.push_back({a, b});
    std::sort(out.begin(), out.end(), [](const Bipartition& a, const Bipartition& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return out;
}

std::vector<Bipartition> bipartitions_of(int n)
{
    std::vector<Bipartition> out;
    for (int m = 0; m <= n; ++m)
        for (const auto& a : partitions_of(m))
            for (const auto& b : partitions_of(n - m))
                out.push_back({a, b});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Complex> spectral_vector(const Bipartition& lam, int n, Complex t, Complex p, Complex q)
{
    if (lam.length() > n)
        throw DomainError("spectral vector: bipartition longer than n");
    std::vector<Complex> v(n);
    for (int i = 1; i <= n; ++i)
        v[i - 1] = ipow(p, lam.first[i]) * ipow(q, lam.second[i]) * ipow(t, n - i);
    return v;
}

std::string to_string(const Bipartition& lam) { return to_string(lam.first) + "|" + to_string(lam.second); }

Bipartition parse_bipartition(const std::string& text)
{
    auto bar = text.find('|');
    if (bar == std::string::npos)
        return {parse_partition(text), {}};
    return {parse_partition(text.substr(0, bar)), parse_partition(text.substr(bar + 1))};
}

} // namespace ellsel
