#include "ellsel/quadrature.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace ellsel {

namespace {

constexpr std::size_t kChunk = 2048;

// Neumaier compensated sum of one real stream.
struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double x)
    {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct ComplexSum {
    Neumaier re, im;
    void add(Complex z)
    {
        re.add(z.real());
        im.add(z.imag());
    }
    Complex value() const { return {re.value(), im.value()}; }
};

struct ChunkSums {
    Complex full, sub;
};

Complex pairwise(std::vector<Complex>& v)
{
    if (v.empty())
        return 0.0;
    for (std::size_t width = 1; width < v.size(); width *= 2)
        for (std::size_t i = 0; i + width < v.size(); i += 2 * width)
            v[i] += v[i + width];
    return v[0];
}

std::string index_label(const std::vector<int>& idx)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t r = 0; r < idx.size(); ++r)
        os << (r ? "," : "") << idx[r];
    os << ")";
    return os.str();
}

} // namespace

std::size_t GridSpec::evals() const
{
    std::size_t n = 1;
    for (int d : dims)
        n *= static_cast<std::size_t>(std::max(d, 0));
    return n;
}

double GridSpec::offset(std::size_t r) const
{
    return phase_offset >= 0.0 ? phase_offset : std::numbers::pi / dims.at(r);
}

void GridSpec::validate() const
{
    if (dims.empty())
        throw DomainError("grid needs at least one dimension");
    double total = 1.0;
    for (int d : dims) {
        if (d < 2 || d % 2 != 0)
            throw DomainError("grid counts must be even and at least 2");
        total *= d;
    }
    if (phase_offset >= 2 * std::numbers::pi)
        throw DomainError("phase offset must lie in [0, 2 pi)");
    if (total > static_cast<double>(budget))
        throw BudgetError("grid " + label() + " needs " + std::to_string(static_cast<long long>(total)) +
                          " evaluations, budget " + std::to_string(budget));
}

GridSpec GridSpec::doubled() const
{
    GridSpec g = *this;
    for (int& d : g.dims)
        d *= 2;
    return g;
}

std::string GridSpec::label() const
{
    std::string s;
    for (std::size_t r = 0; r < dims.size(); ++r)
        s += (r ? "x" : "") + std::to_string(dims[r]);
    return s;
}

int default_threads()
{
    if (const char* env = std::getenv("ELLSEL_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace {

// Sums f over the grid (with offsets offs) and over its even-index subgrid.
std::pair<Complex, Complex> torus_sums(const TorusIntegrand& f, const std::vector<int>& dims,
                                       const std::vector<double>& offs, const std::string& label, int threads)
{
    const std::size_t d = dims.size();
    std::size_t total = 1;
    for (int n : dims)
        total *= static_cast<std::size_t>(n);

    std::vector<std::vector<Complex>> nodes(d);
    for (std::size_t r = 0; r < d; ++r)
        for (int j = 0; j < dims[r]; ++j)
            nodes[r].push_back(std::polar(1.0, 2 * std::numbers::pi * j / dims[r] + offs[r]));

    const std::size_t nchunks = (total + kChunk - 1) / kChunk;
    std::vector<ChunkSums> sums(nchunks);

    std::mutex err_mu;
    std::size_t err_chunk = nchunks;
    std::exception_ptr err;

    auto run_chunk = [&](std::size_t c) {
        std::vector<int> idx(d);
        std::size_t lin = c * kChunk;
        for (std::size_t r = d; r-- > 0;) {
            idx[r] = static_cast<int>(lin % static_cast<std::size_t>(dims[r]));
            lin /= static_cast<std::size_t>(dims[r]);
        }
        std::vector<Complex> z(d);
        ComplexSum full, sub;
        const std::size_t end = std::min(total, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            bool even = true;
            for (std::size_t r = 0; r < d; ++r) {
                z[r] = nodes[r][static_cast<std::size_t>(idx[r])];
                even = even && idx[r] % 2 == 0;
            }
            Complex v = f(z);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericError("non-finite integrand sample at grid index " + index_label(idx) + " of " + label);
            full.add(v);
            if (even)
                sub.add(v);
            for (std::size_t r = d; r-- > 0;) {
                if (++idx[r] < dims[r])
                    break;
                idx[r] = 0;
            }
        }
        sums[c] = {full.value(), sub.value()};
    };

    auto guarded = [&](std::size_t c) {
        try {
            run_chunk(c);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (c < err_chunk) {
                err_chunk = c;
                err = std::current_exception();
            }
        }
    };

    if (threads <= 0)
        threads = default_threads();
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), nchunks);
    if (nthreads <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            guarded(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (std::size_t c; (c = next.fetch_add(1)) < nchunks;)
                    guarded(c);
            });
        for (auto& th : pool)
            th.join();
    }
    if (err)
        std::rethrow_exception(err);

    std::vector<Complex> full(nchunks), sub(nchunks);
    for (std::size_t c = 0; c < nchunks; ++c) {
        full[c] = sums[c].full;
        sub[c] = sums[c].sub;
    }
    return {pairwise(full), pairwise(sub)};
}

} // namespace

QuadResult integrate_torus(const TorusIntegrand& f, const GridSpec& grid, int threads)
{
    grid.validate();
    auto t0 = std::chrono::steady_clock::now();
    const std::size_t d = grid.dims.size();
    const std::size_t total = grid.evals();

    std::vector<double> offs(d);
    for (std::size_t r = 0; r < d; ++r)
        offs[r] = grid.offset(r);
    auto [full, sub] = torus_sums(f, grid.dims, offs, grid.label(), threads);

    QuadResult res;
    res.grid = grid;
    res.evals = total;
    res.value = full / static_cast<double>(total);
    Complex coarse = sub / static_cast<double>(total >> d);
    if (grid.phase_offset < 0.0) {
        // With the half-step offset, z -> 1/z maps the odd nodes onto the even
        // ones, so for BC-symmetric integrands the even subgrid reproduces the
        // full sum. Use the N/2 rule on its own half-step grid instead.
        GridSpec half = grid;
        for (int& n : half.dims)
            n /= 2;
        for (std::size_t r = 0; r < d; ++r)
            offs[r] = std::numbers::pi / half.dims[r];
        coarse = torus_sums(f, half.dims, offs, half.label(), threads).first / static_cast<double>(half.evals());
        res.evals += half.evals();
    }
    res.doubling_estimate = std::abs(res.value - coarse) / std::max(std::abs(res.value), 1e-300);
    res.runtime_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
    return res;
}

QuadResult integrate_adaptive(const TorusIntegrand& f, const GridSpec& start, double target_rel,
                              std::size_t max_budget, int threads, std::vector<QuadResult>* history)
{
    GridSpec g = start;
    g.budget = max_budget;
    long elapsed = 0;
    for (;;) {
        QuadResult r = integrate_torus(f, g, threads);
        elapsed += r.runtime_ms;
        if (history)
            history->push_back(r);
        if (r.doubling_estimate <= target_rel) {
            r.runtime_ms = elapsed;
            return r;
        }
        GridSpec next = g.doubled();
        if (static_cast<double>(next.evals()) > static_cast<double>(max_budget)) {
            r.budget_hit = true;
            r.runtime_ms = elapsed;
            return r;
        }
        g = next;
    }
}

std::string convergence_csv(const std::vector<QuadResult>& rows)
{
    std::ostringstream os;
    os.precision(17);
    os << "grid,value_re,value_im,doubling_estimate,evals,runtime_ms\n";
    for (const auto& r : rows)
        os << r.grid.label() << "," << r.value.real() << "," << r.value.imag() << "," << r.doubling_estimate << ","
           << r.evals << "," << r.runtime_ms << "\n";
    return os.str();
}

} // namespace ellsel
