#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellsel/families.hpp"

namespace ellsel {

enum class Status { pass, fail, infeasible, budget };

std::string to_string(Status s);

/// Outcome of one case.
struct VerificationReport {
    std::string id;
    Family family = Family::beta_k1;
    std::string variant;
    int n = 0;
    std::vector<int> k;
    std::string params; // ParamSet as JSON text, "{}" when there is none
    std::string shapes;
    std::string grid;   // final LHS grid, "" when nothing was integrated
    Complex lhs, rhs;
    double rel_err = 0.0;
    double doubling_estimate = 0.0;
    double tol = 0.0;
    Status status = Status::fail;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
    std::string diagnostics;
};

/// pass iff both sides are finite and rel_err <= tol.
bool passes(Complex lhs, Complex rhs, double rel_err, double tol);

/// |lhs - rhs| / |rhs|, with |lhs - rhs| when rhs is zero.
double relative_error(Complex lhs, Complex rhs);

/// JSON array of report objects; complex values as [re, im].
std::string reports_to_json(const std::vector<VerificationReport>& reports, int indent = 2);

/// Same columns as the JSON objects, lhs/rhs split into _re/_im, params as a JSON string.
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

struct ReportSummary {
    int pass = 0, fail = 0, infeasible = 0, budget = 0;
    double worst_rel_err = 0.0; // over cases that produced both sides
    double runtime_ms = 0.0;

    int total() const { return pass + fail + infeasible + budget; }
    bool all_pass() const { return total() == pass; }
    std::string line() const;
};

ReportSummary summarize(const std::vector<VerificationReport>& reports);

/// 0 when every case passes, 2 otherwise.
int exit_code(const std::vector<VerificationReport>& reports);

} // namespace ellsel
