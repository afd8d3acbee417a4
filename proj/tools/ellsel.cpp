// ellsel: command-line harness for the elliptic Selberg-type identities.
//
// Exit codes: 0 all executed cases pass, 2 any case fails (or an evaluation
// faults), 3 bad arguments or configuration.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellsel/elliptic.hpp"
#include "ellsel/interpolation.hpp"
#include "ellsel/suites.hpp"

using namespace ellsel;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 3;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write " + path);
    out << text;
}

int env_threads(int fallback)
{
    if (const char* s = std::getenv("ELLSEL_THREADS")) {
        try {
            const int v = std::stoi(s);
            if (v > 0)
                return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("ELLSEL_THREADS must be a positive integer, got '") + s + "'");
    }
    return fallback;
}

std::string render(const std::vector<VerificationReport>& reports, const std::string& format)
{
    return format == "csv" ? reports_to_csv(reports) : reports_to_json(reports);
}

// ---- eval ----------------------------------------------------------------

Complex arg_complex(const json& args, const std::string& key)
{
    if (!args.contains(key))
        throw ConfigError("eval: missing argument '" + key + "'");
    const json& v = args[key];
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("eval: argument '" + key + "' must be a number or [re, im]");
}

std::vector<Complex> arg_list(const json& args, const std::string& key)
{
    std::vector<Complex> out;
    if (!args.contains(key))
        return out;
    if (!args[key].is_array())
        throw ConfigError("eval: argument '" + key + "' must be a list");
    for (std::size_t i = 0; i < args[key].size(); ++i)
        out.push_back(arg_complex(json{{"z", args[key][i]}}, "z"));
    return out;
}

Bipartition arg_shape(const json& args, const std::string& key)
{
    if (!args.contains(key))
        return {};
    return parse_bipartition(args[key].get<std::string>());
}

SymbolContext arg_ctx(const json& args)
{
    SymbolContext ctx{{arg_complex(args, "p"), arg_complex(args, "q")}, arg_complex(args, "t")};
    ctx.nomes.validate();
    return ctx;
}

Complex evaluate(const std::string& fn, const json& args)
{
    if (fn == "theta")
        return theta(arg_complex(args, "z"), arg_complex(args, "p"));
    if (fn == "gamma") {
        NomePair nomes{arg_complex(args, "p"), arg_complex(args, "q")};
        nomes.validate();
        return elliptic_gamma(arg_complex(args, "z"), nomes);
    }
    if (fn == "binomial") {
        BinomialQuery query{arg_shape(args, "lam"), arg_shape(args, "mu"), arg_complex(args, "a"),
                            arg_complex(args, "b"), arg_ctx(args), arg_list(args, "bracket")};
        return binomial(query);
    }
    if (fn == "interp") {
        InterpSpec spec;
        spec.lam = arg_shape(args, "lam");
        spec.nu = arg_shape(args, "nu");
        spec.a = arg_complex(args, "a");
        spec.b = arg_complex(args, "b");
        spec.ctx = arg_ctx(args);
        spec.variables = arg_list(args, "vars");
        const std::string kind = args.value("kind", std::string("nonskew"));
        if (kind == "nonskew")
            spec.kind = InterpKind::nonskew;
        else if (kind == "skew")
            spec.kind = InterpKind::skew;
        else if (kind == "hybrid")
            spec.kind = InterpKind::hybrid;
        else
            throw ConfigError("eval: kind must be nonskew, skew or hybrid");
        spec.x_count = args.value("x_count", 0);
        BinomialCache cache;
        return interp(spec, cache);
    }
    throw ConfigError("eval: unknown function '" + fn + "'");
}

// ---- case / convergence ----------------------------------------------------

// The parameter file holds a ParamSet, or a report object whose "params",
// "family", "variant" and "shapes" fill what the command line leaves open.
IdentityCase load_case(const std::string& family, const std::string& path, const std::string& shapes,
                       const std::string& variant)
{
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("parameter file is not valid JSON: " + std::string(e.what()));
    }
    if (j.is_array() && j.size() == 1)
        j = j[0];
    IdentityCase c;
    std::string fam = family, shp = shapes, var = variant;
    if (j.is_object() && j.contains("params")) {
        if (fam.empty())
            fam = j.value("family", std::string());
        if (shp.empty())
            shp = j.value("shapes", std::string());
        if (var.empty())
            var = j.value("variant", std::string());
        c.seed = j.value("seed", std::uint64_t{0});
        c.params = params_from_json(j["params"].dump());
    } else {
        c.params = params_from_json(text);
    }
    if (fam.empty())
        throw ConfigError("--family is required");
    c.family = family_from_string(fam);
    c.variant = var.empty() ? family_info(c.family).variants.front() : var;
    c.shapes = parse_shapes(shp.empty() ? "0|0;0|0" : shp);
    c.id = case_id(c.family, c.variant, c.params.n, c.params.k, to_string(c.shapes), c.seed);
    return c;
}

void print_summary(const std::vector<VerificationReport>& reports)
{
    std::cerr << summarize(reports).line() << '\n';
    for (const auto& r : reports)
        if (r.status != Status::pass)
            std::cerr << "  " << to_string(r.status) << ' ' << r.id << ": " << r.diagnostics << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical verification of elliptic Selberg-type integral identities"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "Run a suite of seeded cases");
    std::string suite = "algebraic", config_path, out_path, format = "json";
    int seeds = 5, threads = 0, grid = 0;
    std::uint64_t first_seed = 0;
    double tol = 0.0;
    verify->add_option("--suite", suite, "Suite or family name (see list)");
    verify->add_option("--seeds", seeds, "Seeds per plan")->check(CLI::NonNegativeNumber);
    verify->add_option("--first-seed", first_seed, "First seed");
    verify->add_option("--grid", grid, "Fixed points per dimension instead of adaptive refinement")
        ->check(CLI::PositiveNumber);
    verify->add_option("--tol", tol, "Tolerance for every case")->check(CLI::PositiveNumber);
    verify->add_option("--threads", threads, "Worker threads (ELLSEL_THREADS overrides)")->check(CLI::PositiveNumber);
    verify->add_option("--out", out_path, "Report file (default stdout)");
    verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--config", config_path, "JSON config file; command-line options win");

    // case
    auto* one = app.add_subcommand("case", "Run one case from a parameter file");
    std::string family, params_path, shapes, variant;
    one->add_option("--family", family, "Family name");
    one->add_option("--params", params_path, "ParamSet JSON, or one report object")->required();
    one->add_option("--shapes", shapes, "\"lam;mu\" such as \"1|0;0|1\"");
    one->add_option("--variant", variant, "Family variant");
    one->add_option("--grid", grid, "Fixed points per dimension")->check(CLI::PositiveNumber);
    one->add_option("--tol", tol, "Tolerance")->check(CLI::PositiveNumber);
    one->add_option("--threads", threads, "Threads")->check(CLI::PositiveNumber);
    one->add_option("--out", out_path, "Report file (default stdout)");
    one->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate one special function");
    std::string fn, args_text;
    ev->add_option("--fn", fn, "Function")->required()->check(CLI::IsMember({"gamma", "theta", "binomial", "interp"}));
    ev->add_option("--args", args_text,
                   "JSON object, e.g. '{\"z\":[0.3,0.1],\"p\":0.2,\"q\":[0.1,0.05]}'; complex values as [re, im]")
        ->required();

    // convergence
    auto* conv = app.add_subcommand("convergence", "Residual and doubling estimate on a ladder of fixed grids");
    int max_grid = 0;
    conv->add_option("--family", family, "Family name");
    conv->add_option("--params", params_path, "ParamSet JSON, or one report object")->required();
    conv->add_option("--shapes", shapes, "\"lam;mu\"");
    conv->add_option("--variant", variant, "Family variant");
    conv->add_option("--max-grid", max_grid, "Largest points per dimension (default from the budget)")
        ->check(CLI::PositiveNumber);
    conv->add_option("--threads", threads, "Threads")->check(CLI::PositiveNumber);
    conv->add_option("--out", out_path, "CSV file (default stdout)");

    app.add_subcommand("list", "Print the family registry and suite names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        threads = env_threads(threads);

        if (app.got_subcommand("list")) {
            for (const auto& info : family_registry()) {
                std::cout << info.name;
                if (info.variants.size() > 1) {
                    std::cout << " [";
                    for (std::size_t i = 0; i < info.variants.size(); ++i)
                        std::cout << (i ? ", " : "") << info.variants[i];
                    std::cout << ']';
                }
                std::cout << "  " << info.summary << '\n';
            }
            std::cout << "suites:";
            for (const auto& s : suite_names())
                std::cout << ' ' << s;
            std::cout << '\n';
            return 0;
        }

        if (app.got_subcommand("eval")) {
            json args;
            try {
                args = json::parse(args_text);
            } catch (const json::exception& e) {
                throw ConfigError("--args is not valid JSON: " + std::string(e.what()));
            }
            if (!args.is_object())
                throw ConfigError("--args must be a JSON object");
            Complex v;
            try {
                v = evaluate(fn, args);
            } catch (const json::exception& e) {
                throw ConfigError("--args: " + std::string(e.what()));
            } catch (const DomainError& e) {
                throw ConfigError(e.what());
            }
            json out{{"fn", fn}, {"value", {v.real(), v.imag()}}};
            std::cout << out.dump() << '\n';
            return std::isfinite(v.real()) && std::isfinite(v.imag()) ? 0 : 2;
        }

        if (app.got_subcommand("verify")) {
            SuiteConfig cfg;
            if (!config_path.empty())
                cfg = config_from_json(read_file(config_path), cfg);
            if (verify->count("--suite"))
                cfg.suite = suite;
            if (verify->count("--seeds"))
                cfg.seeds = seeds;
            if (verify->count("--first-seed"))
                cfg.first_seed = first_seed;
            if (verify->count("--grid"))
                cfg.run.grid = grid;
            if (verify->count("--tol"))
                cfg.run.tol = tol;
            if (threads > 0)
                cfg.run.threads = threads;
            const auto reports = run_suite(cfg);
            write_output(out_path, render(reports, format));
            print_summary(reports);
            return exit_code(reports);
        }

        if (app.got_subcommand("case")) {
            RunOptions opt;
            if (one->count("--grid"))
                opt.grid = grid;
            if (one->count("--tol"))
                opt.tol = tol;
            opt.threads = threads;
            const IdentityCase c = load_case(family, params_path, shapes, variant);
            const std::vector<VerificationReport> reports{run_case(c, opt)};
            write_output(out_path, render(reports, format));
            print_summary(reports);
            return exit_code(reports);
        }

        if (app.got_subcommand("convergence")) {
            const IdentityCase c = load_case(family, params_path, shapes, variant);
            RunOptions opt;
            opt.threads = threads;
            // the assembled integral can have more variables than the ParamSet counts
            const int d = assemble(c, 1).lhs.dim;
            if (d == 0)
                throw ConfigError("case has no integral");
            const std::size_t budget = opt.budgets[static_cast<std::size_t>(std::min(d, 3))];
            int top = max_grid;
            if (top == 0) {
                top = start_grid(d).dims.front();
                while (std::pow(2.0 * top, d) <= static_cast<double>(budget))
                    top *= 2;
            }
            std::ostringstream csv;
            csv << "grid,lhs_re,lhs_im,rhs_re,rhs_im,rel_err,doubling_estimate,status,runtime_ms\n";
            csv.precision(17);
            bool ok = false;
            for (int N = start_grid(d).dims.front(); N <= top; N *= 2) {
                opt.grid = N;
                const VerificationReport r = run_case(c, opt);
                if (r.status == Status::infeasible) {
                    print_summary({r});
                    return 2;
                }
                csv << N << ',' << r.lhs.real() << ',' << r.lhs.imag() << ',' << r.rhs.real() << ',' << r.rhs.imag()
                    << ',' << r.rel_err << ',' << r.doubling_estimate << ',' << to_string(r.status) << ','
                    << r.runtime_ms << '\n';
                ok = r.status == Status::pass;
            }
            write_output(out_path, csv.str());
            return ok ? 0 : 2;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const BalancingError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
