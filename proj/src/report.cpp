#include "ellsel/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace ellsel {

using nlohmann::json;

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// NaN and infinities are not JSON numbers; they go out as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const VerificationReport& r)
{
    json j;
    j["id"] = r.id;
    j["family"] = to_string(r.family);
    if (!r.variant.empty())
        j["variant"] = r.variant;
    j["n"] = r.n;
    j["k"] = r.k;
    j["params"] = json::parse(r.params.empty() ? "{}" : r.params);
    j["shapes"] = r.shapes;
    j["grid"] = r.grid;
    j["lhs"] = finite(r.lhs) ? complex_json(r.lhs) : json(nullptr);
    j["rhs"] = finite(r.rhs) ? complex_json(r.rhs) : json(nullptr);
    j["rel_err"] = number(r.rel_err);
    j["doubling_estimate"] = number(r.doubling_estimate);
    j["tol"] = r.tol;
    j["status"] = to_string(r.status);
    j["seed"] = r.seed;
    j["runtime_ms"] = r.runtime_ms;
    j["diagnostics"] = r.diagnostics;
    return j;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::infeasible:
        return "infeasible";
    case Status::budget:
        return "budget";
    }
    return "fail";
}

bool passes(Complex lhs, Complex rhs, double rel_err, double tol)
{
    return finite(lhs) && finite(rhs) && std::isfinite(rel_err) && rel_err <= tol;
}

double relative_error(Complex lhs, Complex rhs)
{
    const double diff = std::abs(lhs - rhs);
    return std::abs(rhs) > 0.0 ? diff / std::abs(rhs) : diff;
}

std::string reports_to_json(const std::vector<VerificationReport>& reports, int indent)
{
    json arr = json::array();
    for (const auto& r : reports)
        arr.push_back(report_json(r));
    return arr.dump(indent);
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports)
{
    std::ostringstream out;
    out << "id,family,variant,n,k,params,shapes,grid,lhs_re,lhs_im,rhs_re,rhs_im,rel_err,doubling_estimate,tol,status,"
           "seed,runtime_ms,diagnostics\n";
    for (const auto& r : reports) {
        std::string k;
        for (std::size_t i = 0; i < r.k.size(); ++i)
            k += (i ? " " : "") + std::to_string(r.k[i]);
        out << csv_field(r.id) << ',' << to_string(r.family) << ',' << csv_field(r.variant) << ',' << r.n << ','
            << csv_field(k) << ',' << csv_field(r.params) << ',' << csv_field(r.shapes) << ',' << csv_field(r.grid)
            << ',' << num(r.lhs.real()) << ',' << num(r.lhs.imag()) << ',' << num(r.rhs.real()) << ','
            << num(r.rhs.imag()) << ',' << num(r.rel_err) << ',' << num(r.doubling_estimate) << ',' << num(r.tol)
            << ',' << to_string(r.status) << ',' << r.seed << ',' << num(r.runtime_ms) << ','
            << csv_field(r.diagnostics) << '\n';
    }
    return out.str();
}

std::string ReportSummary::line() const
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d cases: %d pass, %d fail, %d infeasible, %d budget; worst rel_err %.3g; %.1f s",
                  total(), pass, fail, infeasible, budget, worst_rel_err, runtime_ms / 1000.0);
    return buf;
}

ReportSummary summarize(const std::vector<VerificationReport>& reports)
{
    ReportSummary s;
    for (const auto& r : reports) {
        switch (r.status) {
        case Status::pass:
            ++s.pass;
            break;
        case Status::fail:
            ++s.fail;
            break;
        case Status::infeasible:
            ++s.infeasible;
            break;
        case Status::budget:
            ++s.budget;
            break;
        }
        if (r.status != Status::infeasible && std::isfinite(r.rel_err))
            s.worst_rel_err = std::max(s.worst_rel_err, r.rel_err);
        s.runtime_ms += r.runtime_ms;
    }
    return s;
}

int exit_code(const std::vector<VerificationReport>& reports)
{
    return summarize(reports).all_pass() ? 0 : 2;
}

} // namespace ellsel
