#include "ellsel/params.hpp"

#include <json.hpp>

namespace ellsel {

namespace {

using nlohmann::json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j, const std::string& what)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("parameter " + what + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

Complex ParamSet::tp(int i) const
{
    if (i < 1 || i > static_cast<int>(ts.size()))
        throw DomainError("parameter t_" + std::to_string(i) + " out of range");
    return ts[static_cast<std::size_t>(i - 1)];
}

int ParamSet::total_dimension() const
{
    int s = 0;
    for (int kr : k)
        s += kr;
    return s;
}

Complex ParamSet::extra_at(const std::string& key) const
{
    auto it = extra.find(key);
    if (it == extra.end())
        throw ConfigError("missing extra parameter '" + key + "'");
    return it->second;
}

void ParamSet::set_c()
{
    c = std::sqrt(p * q / t);
    if (branch_tag == "-")
        c = -c;
    else if (branch_tag != "+")
        throw ConfigError("branch_tag must be \"+\" or \"-\"");
}

double ParamSet::balancing_residual(int r) const
{
    Complex lhs = ipow(t, k_at(r) - k_at(r - 1) + k_at(n) - 2) * tp(2 * r - 1) * tp(2 * r);
    for (int s = 2 * n + 1; s <= 2 * n + 4; ++s)
        lhs *= tp(s);
    return std::abs(lhs - pq()) / std::abs(pq());
}

void ParamSet::validate_basic() const
{
    if (n < 1)
        throw DomainError("n must be at least 1");
    if (static_cast<int>(k.size()) != n)
        throw DomainError("k must have n entries");
    if (k0 < 0)
        throw DomainError("k0 must be nonnegative");
    for (int r = 1; r <= n; ++r)
        if (k_at(r) < 0 || (r > 1 && k_at(r) < k_at(r - 1)))
            throw DomainError("k must be nondecreasing and nonnegative");
    if (static_cast<int>(ts.size()) != 2 * n + 4)
        throw DomainError("ts must have 2n+4 entries");
    nomes().validate();
    if (!(std::abs(t) < 1.0) || !(std::abs(pq() / t) < 1.0) || t == Complex(0.0))
        throw DomainError("need 0 < |t| < 1 and |pq/t| < 1");
    if (std::abs(c * c - pq() / t) > 1e-14 * std::abs(pq() / t))
        throw DomainError("c^2 differs from pq/t");
    for (Complex z : ts)
        if (z == Complex(0.0) || !std::isfinite(std::abs(z)))
            throw DomainError("parameters t_r must be finite and nonzero");
}

void ParamSet::validate_balanced() const
{
    validate_basic();
    for (int r = 1; r <= n; ++r) {
        double res = balancing_residual(r);
        if (!(res <= 1e-13))
            throw BalancingError("balancing condition r=" + std::to_string(r) + " violated, relative residual " +
                                 std::to_string(res));
    }
}

void ParamSet::solve_partner(int r)
{
    Complex rest = ipow(t, k_at(r) - k_at(r - 1) + k_at(n) - 2) * tp(2 * r - 1);
    for (int s = 2 * n + 1; s <= 2 * n + 4; ++s)
        rest *= tp(s);
    ts.at(static_cast<std::size_t>(2 * r - 1)) = pq() / rest;
}

std::string to_json(const ParamSet& ps, int indent)
{
    json j;
    j["n"] = ps.n;
    j["k"] = ps.k;
    j["k0"] = ps.k0;
    j["p"] = complex_json(ps.p);
    j["q"] = complex_json(ps.q);
    j["t"] = complex_json(ps.t);
    j["c"] = complex_json(ps.c);
    json ts = json::array();
    for (Complex z : ps.ts)
        ts.push_back(complex_json(z));
    j["ts"] = ts;
    j["branch_tag"] = ps.branch_tag;
    json extra = json::object();
    for (const auto& [key, v] : ps.extra)
        extra[key] = complex_json(v);
    j["extra"] = extra;
    return j.dump(indent);
}

ParamSet params_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("parameter file is not valid JSON: ") + e.what());
    }
    ParamSet ps;
    try {
        ps.n = j.at("n").get<int>();
        ps.k = j.at("k").get<std::vector<int>>();
        ps.k0 = j.value("k0", 0);
        ps.p = complex_from(j.at("p"), "p");
        ps.q = complex_from(j.at("q"), "q");
        ps.t = complex_from(j.at("t"), "t");
        ps.ts.clear();
        for (const auto& z : j.at("ts"))
            ps.ts.push_back(complex_from(z, "ts"));
        ps.branch_tag = j.value("branch_tag", std::string("+"));
        if (j.contains("extra"))
            for (const auto& [key, v] : j["extra"].items())
                ps.extra[key] = complex_from(v, key);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("parameter file: ") + e.what());
    }
    ps.set_c();
    return ps;
}

} // namespace ellsel
