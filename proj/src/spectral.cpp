#include "gpe/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace gpe {

double phi1(double x) {
    if (x < 0.0) throw ConfigError("phi1: argument must be nonnegative");
    // Truncated series below the threshold (error < 1e-17 there); expm1 keeps
    // the direct branch fully accurate, so the two join to ~1 ulp.
    if (x < 1e-4) return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
    return -std::expm1(-x) / x;
}

EtdMultipliers EtdMultipliers::build(const GridSpec& spec, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ConfigError("EtdMultipliers: tau must be positive and finite");

    EtdMultipliers m;
    m.spec_ = spec;
    m.tau_ = tau;
    const std::size_t total = spec.size();
    m.lam_.resize(total);
    m.g_.resize(total);
    m.gsqrt_.resize(total);
    m.gdelta_.resize(total);

    const int dim = spec.dim();
    std::array<double, 3> axis_scale{};
    for (int a = 0; a < dim; ++a) axis_scale[a] = 4.0 / (spec.h(a) * spec.h(a));

    std::array<int, 3> k{0, 0, 0};
    for (std::size_t i = 0; i < total; ++i) {
        double lam = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double s = std::sin(M_PI * k[a] / spec.n(a));
            lam += axis_scale[a] * s * s;
        }
        const double g = phi1(0.5 * tau * lam);
        m.lam_[i] = lam;
        m.g_[i] = g;
        m.gsqrt_[i] = std::sqrt(g);
        m.gdelta_[i] = -lam * g;
        for (int a = dim - 1; a >= 0; --a) {
            if (++k[a] < spec.n(a)) break;
            k[a] = 0;
        }
    }
    return m;
}

namespace {

// FFTW's planner is not thread safe; executing a plan on fresh arrays is.
// Plans are cached per (dims, direction) and executed on thread-local
// fftw-aligned buffers via the new-array interface.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

using PlanKey = std::tuple<int, int, int, int, int>;  // dim, n0, n1, n2, sign

fftw_plan get_plan(const GridSpec& spec, int sign, fftw_complex* in, fftw_complex* out) {
    static std::map<PlanKey, fftw_plan> cache;
    PlanKey key{spec.dim(), spec.n(0), spec.dim() > 1 ? spec.n(1) : 0,
                spec.dim() > 2 ? spec.n(2) : 0, sign};
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int dims[3] = {spec.n(0), spec.n(1), spec.n(2)};
    fftw_plan plan = fftw_plan_dft(spec.dim(), dims, in, out, sign, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw_plan_dft failed");
    cache.emplace(key, plan);
    return plan;
}

struct FftwBuffer {
    fftw_complex* data = nullptr;
    std::size_t capacity = 0;

    ~FftwBuffer() { fftw_free(data); }

    void ensure(std::size_t n) {
        if (capacity >= n) return;
        fftw_free(data);
        data = fftw_alloc_complex(n);
        capacity = data ? n : 0;
        if (!data) throw std::bad_alloc();
    }
};

void execute_dft(const GridSpec& spec, int sign, std::span<const Complex> in,
                 std::span<Complex> out) {
    thread_local FftwBuffer buf_in, buf_out;
    const std::size_t n = spec.size();
    buf_in.ensure(n);
    buf_out.ensure(n);

    fftw_plan plan = get_plan(spec, sign, buf_in.data, buf_out.data);
    for (std::size_t i = 0; i < n; ++i) {
        buf_in.data[i][0] = in[i].real();
        buf_in.data[i][1] = in[i].imag();
    }
    fftw_execute_dft(plan, buf_in.data, buf_out.data);
    for (std::size_t i = 0; i < n; ++i) out[i] = Complex{buf_out.data[i][0], buf_out.data[i][1]};
}

}  // namespace

std::vector<Complex> dft_forward(const GridFunction& f) {
    std::vector<Complex> hat(f.size());
    execute_dft(f.spec(), FFTW_FORWARD, f.values(), hat);
    return hat;
}

GridFunction dft_inverse(const GridSpec& spec, std::span<const Complex> hat) {
    if (hat.size() != spec.size()) throw ShapeError("dft_inverse: spectrum size mismatch");
    GridFunction out(spec);
    execute_dft(spec, FFTW_BACKWARD, hat, out.values());
    const double scale = 1.0 / static_cast<double>(spec.size());
    for (auto& v : out.values()) v *= scale;
    return out;
}

GridFunction apply(const EtdMultipliers& mult, Multiplier which, const GridFunction& f) {
    if (f.spec() != mult.spec()) throw ShapeError("apply: grid specs differ");
    const std::vector<double>* m = nullptr;
    switch (which) {
        case Multiplier::G: m = &mult.g(); break;
        case Multiplier::GSqrt: m = &mult.gsqrt(); break;
        case Multiplier::GDelta: m = &mult.gdelta(); break;
    }
    std::vector<Complex> hat = dft_forward(f);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= (*m)[i];
    return dft_inverse(f.spec(), hat);
}

double gsqrt_grad_sq(const EtdMultipliers& mult, const GridFunction& f) {
    if (f.spec() != mult.spec()) throw ShapeError("gsqrt_grad_sq: grid specs differ");
    const std::vector<Complex> hat = dft_forward(f);
    double sum = 0.0;
    const auto& g = mult.g();
    const auto& lam = mult.lam();
    for (std::size_t i = 0; i < hat.size(); ++i) sum += g[i] * lam[i] * std::norm(hat[i]);
    return sum * f.spec().cell_volume() / static_cast<double>(f.size());
}

}  // namespace gpe
