#include "ellsel/feasibility.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ellsel {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

} // namespace

std::string FeasibilityReport::summary() const
{
    if (feasible)
        return "feasible (log margin " + fmt(log_margin) + ")";
    std::string out = "infeasible:";
    for (const auto& v : violations)
        out += " " + v + ";";
    return out;
}

std::vector<PoleCondition> an_contour_conditions(const ParamSet& ps)
{
    std::vector<PoleCondition> out;
    const int n = ps.n;
    auto name = [](int i) { return "t_" + std::to_string(i); };
    for (int r = 1; r < n; ++r) {
        const std::string lvl = "level " + std::to_string(r) + ": ";
        Complex down = ipow(ps.c, r - n), up = ps.t * ipow(ps.c, n - r);
        for (int s = 1; s <= 2; ++s) {
            out.push_back({lvl + "c^(r-n) " + name(2 * r + s - 2), down * ps.tp(2 * r + s - 2)});
            out.push_back({lvl + "t c^(n-r) / " + name(2 * r + s), up / ps.tp(2 * r + s)});
        }
        out.push_back({lvl + "t (self-shift)", ps.t});
        out.push_back({lvl + "c (neighbouring level)", ps.c});
    }
    const std::string top = "level " + std::to_string(n) + ": ";
    for (int s = 1; s <= 6; ++s)
        out.push_back({top + name(s + 2 * n - 2), ps.tp(s + 2 * n - 2)});
    out.push_back({top + "t (self-shift)", ps.t});
    if (n >= 2)
        out.push_back({top + "c (neighbouring level)", ps.c});
    return out;
}

std::vector<std::string> k_profile_violations(const ParamSet& ps)
{
    std::vector<std::string> out;
    for (int r = 1; r < ps.n; ++r) {
        const int d = ps.k_at(r + 1) - 2 * ps.k_at(r) + ps.k_at(r - 1);
        if (d < -1)
            out.push_back("k_" + std::to_string(r + 1) + " - 2 k_" + std::to_string(r) + " + k_" +
                          std::to_string(r - 1) + " = " + std::to_string(d) + ", needs >= -1");
    }
    return out;
}

std::vector<PoleCondition> interpolation_conditions(const PoleMap& poles, const std::string& source)
{
    std::vector<PoleCondition> out;
    for (const auto& s : poles.to_zero)
        out.push_back({source + " pole sequence", s.head});
    return out;
}

FeasibilityReport evaluate_conditions(const std::vector<PoleCondition>& conds, double delta)
{
    FeasibilityReport rep;
    rep.delta = delta;
    rep.log_margin = std::numeric_limits<double>::infinity();
    for (const auto& c : conds) {
        double m = std::abs(c.head);
        rep.log_margin = std::min(rep.log_margin, -std::log(m));
        if (!(m < 1.0 - delta)) {
            rep.feasible = false;
            rep.violations.push_back(c.what + " has modulus " + fmt(m) + ", needs < " + fmt(1.0 - delta) +
                                     " (reciprocal " + fmt(1.0 / m) + " must exceed " + fmt(1.0 + delta) + ")");
        }
    }
    return rep;
}

FeasibilityReport feasibility_check(const ParamSet& ps, const std::vector<PoleCondition>& extra, double delta)
{
    auto conds = an_contour_conditions(ps);
    conds.insert(conds.end(), extra.begin(), extra.end());
    return evaluate_conditions(conds, delta);
}

} // namespace ellsel
