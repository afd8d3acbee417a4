#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellsel/report.hpp"
#include "ellsel/sampler.hpp"

namespace ellsel {

/// Knobs shared by single cases and suites.
struct RunOptions {
    int threads = 0;                       // 0: default_threads()
    std::optional<double> tol;             // overrides the per-dimension default
    std::optional<int> grid;               // fixed N per dimension instead of adaptive refinement
    std::vector<double> tolerances{1e-6, 1e-9, 1e-6, 1e-4}; // by integral dimension 0..3
    std::vector<std::size_t> budgets{0, 1u << 14, 1u << 17, 150'000}; // max evaluations per integral
    double delta = 0.05;                   // feasibility margin
    double sample_delta = 0.15;            // margin the sampler aims for
    int max_tries = 20000;
};

/// Tolerance for an integral of the given dimension.
double default_tol(const RunOptions& opt, int dim);

/// Starting grid for adaptive refinement: 32, 16^2, 12^3.
GridSpec start_grid(int dim);

/// Assemble, integrate and compare one case. Infeasible parameters, budget
/// exhaustion and numeric faults become statuses; ConfigError and
/// BalancingError propagate.
VerificationReport run_case(const IdentityCase& c, const RunOptions& opt);

/// Draw a case from the sampler and run it; an infeasible draw is reported
/// with the violations of the best attempt.
VerificationReport run_drawn(const DrawRequest& req, const RunOptions& opt);

/// One line of a suite: a family with fixed sizes and a rotation of shapes.
struct SuitePlan {
    Family family;
    std::string variant;
    int n = 1;
    std::vector<int> k{1};
    std::vector<std::string> shapes{"0|0;0|0"}; // seed s uses shapes[s % size]
};

std::vector<std::string> suite_names();

/// Plans of a named suite; throws ConfigError for an unknown name.
/// "algebraic" has no plans (its checks are not integrals).
std::vector<SuitePlan> suite_plans(const std::string& suite);

struct SuiteConfig {
    std::string suite = "algebraic";
    int seeds = 5;
    std::uint64_t first_seed = 0;
    RunOptions run;
};

/// Keys: suite, seeds, first_seed, tol, grid, threads, delta, sample_delta,
/// max_tries, tolerances {"0".."3"}, budgets {"1".."3"}. Unknown keys are a ConfigError.
SuiteConfig config_from_json(const std::string& text, SuiteConfig base = {});

/// Draws seeds x plans cases (seed s uses the plan's shapes[s % size]) and runs
/// them in a worker pool; sorted by id.
std::vector<VerificationReport> run_plans(const std::vector<SuitePlan>& plans, int seeds, std::uint64_t first_seed,
                                          const RunOptions& opt);

/// Every case of the suite, sorted by id. Cases run in a pool of worker
/// threads; each case integrates with the threads left over.
std::vector<VerificationReport> run_suite(const SuiteConfig& cfg);

/// Case id: family[/variant]/n{n}k{k...}/{shapes}/s{seed:04}.
std::string case_id(Family f, const std::string& variant, int n, const std::vector<int>& k, const std::string& shapes,
                    std::uint64_t seed);

} // namespace ellsel
