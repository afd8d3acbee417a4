#include "ellsel/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include <json.hpp>

#include "ellsel/algebraic.hpp"

namespace ellsel {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string k_label(const std::vector<int>& k)
{
    std::string s;
    for (int v : k)
        s += std::to_string(v);
    return s;
}

void fill_header(VerificationReport& r, const IdentityCase& c)
{
    r.id = c.id.empty() ? case_id(c.family, c.variant, c.params.n, c.params.k, to_string(c.shapes), c.seed) : c.id;
    r.family = c.family;
    r.variant = c.variant;
    r.n = c.params.n;
    r.k = c.params.k;
    r.params = to_json(c.params);
    r.shapes = to_string(c.shapes);
    r.seed = c.seed;
}

struct Integrated {
    Complex value;
    QuadResult quad;
    bool integrated = false;
};

Integrated integrate(const IntegralTerm& term, const IdentityCase& c, const RunOptions& opt, double tol, int threads)
{
    Integrated out;
    if (term.dim == 0) {
        out.value = term.f({});
        return out;
    }
    out.integrated = true;
    const auto d = static_cast<std::size_t>(term.dim);
    if (opt.grid) {
        out.quad = integrate_torus(term.f, GridSpec{std::vector<int>(d, *opt.grid)}, threads);
    } else if (!c.adaptive && c.grid.dims.size() == d) {
        out.quad = integrate_torus(term.f, c.grid, threads);
    } else {
        const GridSpec start = c.grid.dims.size() == d ? c.grid : start_grid(term.dim);
        const std::size_t budget = d < opt.budgets.size() ? opt.budgets[d] : opt.budgets.back();
        out.quad = integrate_adaptive(term.f, start, 0.5 * tol, budget, threads);
    }
    out.value = out.quad.value;
    return out;
}

int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

// ---- suite plans ---------------------------------------------------------

const std::vector<std::string> kOneBox{"0|0;1|0", "0|0;0|1"};

std::vector<SuitePlan> plans_integrals_1d()
{
    return {
        {Family::beta_k1, "default", 1, {1}, {"0|0;0|0"}},
        {Family::vdBult, "default", 1, {1}, {"0|0;0|0", "0|0;1|0", "0|0;0|1", "0|0;2|0", "0|0;0|2", "0|0;1|1"}},
        {Family::key_theorem, "default", 1, {1}, {"0|0;0|0", "0|0;1|0", "0|0;0|1", "0|0;2|0", "0|0;0|2"}},
        {Family::prop_RK, "default", 1, {1}, {"0|0;0|0", "0|0;1|0", "0|0;0|1", "0|0;2|0", "0|0;0|2"}},
    };
}

std::vector<SuitePlan> plans_an()
{
    return {
        {Family::an_selberg, "default", 1, {1}, {"0|0;0|0"}},
        {Family::an_selberg, "default", 2, {1, 1}, {"0|0;0|0"}},
        {Family::an_aflt, "default", 1, {1},
         {"0|0;0|0", "1|0;0|0", "0|0;0|1", "1|0;1|0", "0|1;1|0", "1|1;1|0", "2|0;0|1", "0|2;1|0"}},
        {Family::an_aflt, "default", 2, {1, 1}, {"1|0;0|0", "0|0;0|1", "0|1;1|0", "1|0;1|0"}},
    };
}

std::vector<SuitePlan> plans_selberg()
{
    return {
        {Family::beta_k1, "default", 1, {1}, {"0|0;0|0"}},
        {Family::selberg_A1, "default", 1, {2}, {"0|0;0|0"}},
    };
}

std::vector<SuitePlan> plans_kernel()
{
    return {
        {Family::kernel_decomp, "theorem", 1, {1}, {"0|0;0|0"}},
        {Family::kernel_decomp, "corollary", 1, {1}, {"0|0;0|0"}},
        {Family::kernel_consistency, "factored", 1, {2}, {"0|0;0|0"}},
        {Family::kernel_consistency, "spectral", 1, {2}, {"1|0;0|0", "0|1;0|0"}},
    };
}

std::vector<SuitePlan> plans_corollaries()
{
    return {
        {Family::an_kadell, "default", 1, {1}, {"1|0;0|0", "0|1;0|0", "1|1;0|0", "2|0;0|0", "0|2;0|0"}},
        {Family::an_hua_kadell, "default", 1, {1}, {"0|0;0|0", "1|0;0|1", "0|0;1|1", "1|1;0|0", "2|0;1|0"}},
    };
}

std::vector<SuitePlan> plans_xselberg()
{
    return {
        {Family::prop_xselberg_base, "base", 1, {1}, {"0|0;0|0", "0|0;1|0", "0|0;0|1"}},
        {Family::prop_xselberg_base, "step", 2, {1, 1}, {"0|0;0|0", "0|0;1|0", "0|0;0|1"}},
        {Family::equal_k_recursion, "default", 2, {1, 1}, {"0|0;0|0", "1|0;0|0", "0|0;0|1", "1|0;0|1"}},
    };
}

const std::vector<std::pair<std::string, std::function<std::vector<SuitePlan>()>>>& suite_table()
{
    static const std::vector<std::pair<std::string, std::function<std::vector<SuitePlan>()>>> table = {
        {"algebraic", [] { return std::vector<SuitePlan>{}; }},
        {"integrals-1d", plans_integrals_1d},
        {"an", plans_an},
        {"selberg", plans_selberg},
        {"kernel", plans_kernel},
        {"corollaries", plans_corollaries},
        {"xselberg", plans_xselberg},
        {"all",
         [] {
             std::vector<SuitePlan> all;
             for (auto f : {plans_selberg, plans_integrals_1d, plans_kernel, plans_an, plans_corollaries,
                            plans_xselberg})
                 for (auto& p : f())
                     all.push_back(std::move(p));
             return all;
         }},
    };
    return table;
}

std::vector<VerificationReport> algebraic_reports(std::uint64_t seed)
{
    std::vector<VerificationReport> out;
    const auto t0 = Clock::now();
    const std::vector<AlgebraicCheck> checks = algebraic_checks(seed);
    const double each = ms_since(t0) / static_cast<double>(std::max<std::size_t>(1, checks.size()));
    for (const auto& ch : checks) {
        VerificationReport r;
        char sid[16];
        std::snprintf(sid, sizeof sid, "s%04llu", static_cast<unsigned long long>(seed));
        r.id = "algebraic_suite/" + ch.name + "/" + sid;
        r.family = Family::algebraic_suite;
        r.variant = ch.name;
        r.params = "{}";
        r.shapes = ch.shape;
        r.lhs = ch.lhs;
        r.rhs = ch.rhs;
        r.rel_err = ch.residual;
        r.tol = ch.tol;
        r.status = ch.pass ? Status::pass : Status::fail;
        r.seed = seed;
        r.diagnostics = ch.error;
        r.runtime_ms = each;
        out.push_back(std::move(r));
    }
    return out;
}

// Runs jobs on `workers` threads; results land at their own index.
void run_pool(std::vector<std::function<void()>>& jobs, int workers)
{
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            jobs[i]();
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
}

} // namespace

double default_tol(const RunOptions& opt, int dim)
{
    if (opt.tol)
        return *opt.tol;
    const auto d = static_cast<std::size_t>(std::clamp(dim, 0, static_cast<int>(opt.tolerances.size()) - 1));
    return opt.tolerances[d];
}

GridSpec start_grid(int dim)
{
    const int n = dim == 1 ? 32 : dim == 2 ? 16 : 12;
    return GridSpec{std::vector<int>(static_cast<std::size_t>(dim), n)};
}

std::string case_id(Family f, const std::string& variant, int n, const std::vector<int>& k, const std::string& shapes,
                    std::uint64_t seed)
{
    char sid[16];
    std::snprintf(sid, sizeof sid, "s%04llu", static_cast<unsigned long long>(seed));
    std::string id = to_string(f);
    if (!variant.empty() && variant != "default")
        id += "/" + variant;
    return id + "/n" + std::to_string(n) + "k" + k_label(k) + "/" + shapes + "/" + sid;
}

VerificationReport run_case(const IdentityCase& c, const RunOptions& opt)
{
    const auto t0 = Clock::now();
    VerificationReport r;
    fill_header(r, c);
    r.tol = c.tol > 0 ? c.tol : default_tol(opt, c.params.total_dimension());

    std::vector<std::string> bad = k_profile_violations(c.params);
    const FeasibilityReport feas = evaluate_conditions(case_conditions(c), opt.delta);
    if (!feas.feasible || !bad.empty()) {
        r.status = Status::infeasible;
        r.lhs = r.rhs = {std::nan(""), std::nan("")};
        r.rel_err = std::nan("");
        for (const auto& v : feas.violations)
            bad.push_back(v);
        std::string d = "infeasible on the unit torus:";
        for (const auto& v : bad)
            d += " " + v + ";";
        r.diagnostics = d;
        r.runtime_ms = ms_since(t0);
        return r;
    }

    const int threads = resolve_threads(opt.threads);
    bool compared = false;
    try {
        const AssembledCase a = assemble(c, threads);
        r.tol = c.tol > 0 ? c.tol : default_tol(opt, a.lhs.dim);
        const Integrated lhs = integrate(a.lhs, c, opt, r.tol, threads);
        r.lhs = a.lhs_factor * lhs.value;
        r.rhs = a.rhs_factor;
        bool budget_hit = lhs.quad.budget_hit;
        r.doubling_estimate = lhs.quad.doubling_estimate;
        if (lhs.integrated)
            r.grid = lhs.quad.grid.label();
        if (a.rhs_integral) {
            const Integrated rhs = integrate(*a.rhs_integral, c, opt, r.tol, threads);
            r.rhs *= rhs.value;
            budget_hit = budget_hit || rhs.quad.budget_hit;
            r.doubling_estimate = std::max(r.doubling_estimate, rhs.quad.doubling_estimate);
            if (rhs.integrated)
                r.grid += (r.grid.empty() ? "" : "; ") + std::string("rhs ") + rhs.quad.grid.label();
        }
        r.rel_err = relative_error(r.lhs, r.rhs);
        compared = true;
        if (passes(r.lhs, r.rhs, r.rel_err, r.tol))
            r.status = Status::pass;
        else
            r.status = budget_hit ? Status::budget : Status::fail;
        std::string d = a.note;
        if (r.status != Status::pass) {
            d += (d.empty() ? "" : "; ") + std::string("residual ") + fmt(r.rel_err) + " vs doubling estimate " +
                 fmt(r.doubling_estimate);
            if (budget_hit)
                d += "; grid budget exhausted";
        }
        r.diagnostics = d;
    } catch (const ConfigError&) {
        throw;
    } catch (const BalancingError&) {
        throw;
    } catch (const BudgetError& e) {
        r.status = Status::budget;
        r.diagnostics = e.what();
    } catch (const ContourError& e) {
        r.status = Status::infeasible;
        r.diagnostics = e.what();
    } catch (const Error& e) {
        r.status = Status::fail;
        r.diagnostics = std::string("numeric fault: ") + e.what();
    }
    if (!compared) {
        r.lhs = r.rhs = {std::nan(""), std::nan("")};
        r.rel_err = std::nan("");
    }
    r.runtime_ms = ms_since(t0);
    return r;
}

VerificationReport run_drawn(const DrawRequest& req, const RunOptions& opt)
{
    const auto t0 = Clock::now();
    DrawRequest rq = req;
    rq.delta = opt.delta;
    rq.sample_delta = opt.sample_delta;
    rq.max_tries = opt.max_tries;
    DrawOutcome out = draw_case(rq);
    out.c.id = case_id(req.family, req.variant, req.n, req.k, to_string(req.shapes), req.seed);
    out.c.seed = req.seed;
    if (out.feasible) {
        VerificationReport r = run_case(out.c, opt);
        r.runtime_ms = ms_since(t0);
        return r;
    }
    VerificationReport r;
    out.c.family = req.family;
    out.c.variant = req.variant;
    out.c.shapes = req.shapes;
    if (out.c.params.ts.empty()) {
        out.c.params.n = req.n;
        out.c.params.k = req.k;
    }
    fill_header(r, out.c);
    r.tol = default_tol(opt, out.c.params.total_dimension());
    r.status = Status::infeasible;
    r.lhs = r.rhs = {std::nan(""), std::nan("")};
    r.rel_err = std::nan("");
    r.diagnostics = "no draw in " + std::to_string(out.tries) + " tries is feasible on the unit torus; best: " +
                    out.report.summary();
    r.runtime_ms = ms_since(t0);
    return r;
}

std::vector<std::string> suite_names()
{
    std::vector<std::string> out;
    for (const auto& [name, _] : suite_table())
        out.push_back(name);
    return out;
}

std::vector<SuitePlan> suite_plans(const std::string& suite)
{
    for (const auto& [name, make] : suite_table())
        if (name == suite)
            return make();
    // a family name selects that family's plans from "all"
    for (const auto& info : family_registry())
        if (info.name == suite) {
            std::vector<SuitePlan> out;
            for (auto& p : suite_table().back().second())
                if (p.family == info.family)
                    out.push_back(std::move(p));
            if (!out.empty())
                return out;
        }
    std::string known;
    for (const auto& n : suite_names())
        known += " " + n;
    throw ConfigError("unknown suite '" + suite + "'; known:" + known + " or a family name");
}

SuiteConfig config_from_json(const std::string& text, SuiteConfig base)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "suite")
                base.suite = v.get<std::string>();
            else if (key == "seeds")
                base.seeds = v.get<int>();
            else if (key == "first_seed")
                base.first_seed = v.get<std::uint64_t>();
            else if (key == "tol")
                base.run.tol = v.get<double>();
            else if (key == "grid")
                base.run.grid = v.get<int>();
            else if (key == "threads")
                base.run.threads = v.get<int>();
            else if (key == "delta")
                base.run.delta = v.get<double>();
            else if (key == "sample_delta")
                base.run.sample_delta = v.get<double>();
            else if (key == "max_tries")
                base.run.max_tries = v.get<int>();
            else if (key == "tolerances") {
                for (const auto& [d, t] : v.items()) {
                    const int dim = std::stoi(d);
                    if (dim < 0 || dim > 3)
                        throw ConfigError("tolerances: dimension " + d + " is not in 0..3");
                    base.run.tolerances[static_cast<std::size_t>(dim)] = t.get<double>();
                }
            } else if (key == "budgets") {
                for (const auto& [d, b] : v.items()) {
                    const int dim = std::stoi(d);
                    if (dim < 1 || dim > 3)
                        throw ConfigError("budgets: dimension " + d + " is not in 1..3");
                    base.run.budgets[static_cast<std::size_t>(dim)] = b.get<std::size_t>();
                }
            } else
                throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config value has the wrong type: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ConfigError("config dimension keys must be integers");
    }
    if (base.seeds < 0)
        throw ConfigError("seeds must be nonnegative");
    if (base.run.delta <= 0 || base.run.delta >= 1)
        throw ConfigError("delta must lie in (0, 1)");
    return base;
}

std::vector<VerificationReport> run_plans(const std::vector<SuitePlan>& plans, int seeds, std::uint64_t first_seed,
                                          const RunOptions& opt)
{
    std::vector<DrawRequest> requests;
    for (int s = 0; s < seeds; ++s)
        for (const auto& p : plans) {
            DrawRequest req;
            req.family = p.family;
            req.variant = p.variant;
            req.n = p.n;
            req.k = p.k;
            req.seed = first_seed + static_cast<std::uint64_t>(s);
            req.shapes = parse_shapes(p.shapes[static_cast<std::size_t>(s) % p.shapes.size()]);
            requests.push_back(req);
        }

    const int threads = resolve_threads(opt.threads);
    std::vector<VerificationReport> reports(requests.size());
    const int workers = std::max(1, std::min(threads, static_cast<int>(requests.size())));
    RunOptions inner = opt;
    inner.threads = std::max(1, threads / workers);
    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < requests.size(); ++i)
        jobs.push_back([&, i] {
            const DrawRequest& rq = requests[i];
            try {
                reports[i] = run_drawn(rq, inner);
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                // a sampled case with malformed parameters is a sampler bug
                VerificationReport& r = reports[i];
                r.id = case_id(rq.family, rq.variant, rq.n, rq.k, to_string(rq.shapes), rq.seed);
                r.family = rq.family;
                r.variant = rq.variant;
                r.n = rq.n;
                r.k = rq.k;
                r.seed = rq.seed;
                r.params = "{}";
                r.shapes = to_string(rq.shapes);
                r.status = Status::fail;
                r.rel_err = std::nan("");
                r.diagnostics = std::string("sampled case rejected: ") + e.what();
            }
        });
    run_pool(jobs, workers);
    std::sort(reports.begin(), reports.end(),
              [](const VerificationReport& a, const VerificationReport& b) { return a.id < b.id; });
    return reports;
}

std::vector<VerificationReport> run_suite(const SuiteConfig& cfg)
{
    if (cfg.seeds < 0)
        throw ConfigError("seeds must be nonnegative");
    const std::vector<SuitePlan> plans = suite_plans(cfg.suite);

    std::vector<VerificationReport> reports;
    if (cfg.suite == "algebraic" || cfg.suite == "all")
        for (int s = 0; s < cfg.seeds; ++s)
            for (auto& r : algebraic_reports(cfg.first_seed + static_cast<std::uint64_t>(s)))
                reports.push_back(std::move(r));
    for (auto& r : run_plans(plans, cfg.seeds, cfg.first_seed, cfg.run))
        reports.push_back(std::move(r));
    std::sort(reports.begin(), reports.end(),
              [](const VerificationReport& a, const VerificationReport& b) { return a.id < b.id; });
    return reports;
}

} // namespace ellsel
