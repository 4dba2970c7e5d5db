#include "gpe/grid.hpp"

#include <cmath>
#include <limits>

namespace gpe {

namespace {

// Largest point count we are willing to allocate (complex doubles, and FFTW
// plans use int sizes).
constexpr std::size_t kMaxPoints = std::size_t{1} << 28;

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* op) {
    if (a != b)
        throw ShapeError(std::string(op) + ": grid specs differ");
}

}  // namespace

GridSpec GridSpec::make(int dim,
                        std::span<const int> n,
                        std::span<const double> lo,
                        std::span<const double> hi) {
    if (dim < 1 || dim > 3)
        throw ConfigError("GridSpec: dim must be 1, 2 or 3");
    if (n.size() != static_cast<std::size_t>(dim) ||
        lo.size() != static_cast<std::size_t>(dim) ||
        hi.size() != static_cast<std::size_t>(dim))
        throw ConfigError("GridSpec: n/lo/hi must each have one entry per axis");

    GridSpec s;
    s.dim_ = dim;
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) {
        if (n[a] < 4)
            throw ConfigError("GridSpec: n must be >= 4 on every axis");
        if (!(hi[a] > lo[a]))
            throw ConfigError("GridSpec: hi must exceed lo on every axis");
        if (total > kMaxPoints / static_cast<std::size_t>(n[a]))
            throw ConfigError("GridSpec: total point count overflows the addressable limit");
        total *= static_cast<std::size_t>(n[a]);
        s.n_[a] = n[a];
        s.lo_[a] = lo[a];
        s.hi_[a] = hi[a];
        s.h_[a] = (hi[a] - lo[a]) / n[a];
        if (!(s.h_[a] > 0.0) || !std::isfinite(s.h_[a]))
            throw ConfigError("GridSpec: spacing must be positive and finite");
    }
    s.size_ = total;
    // Row-major, axis order (x,y,z): last axis fastest.
    std::size_t stride = 1;
    for (int a = dim - 1; a >= 0; --a) {
        s.stride_[a] = stride;
        stride *= static_cast<std::size_t>(s.n_[a]);
    }
    return s;
}

GridSpec GridSpec::make_uniform(int dim, int n, double lo, double hi) {
    std::array<int, 3> ns{n, n, n};
    std::array<double, 3> los{lo, lo, lo};
    std::array<double, 3> his{hi, hi, hi};
    return make(dim, std::span<const int>(ns.data(), dim),
                std::span<const double>(los.data(), dim),
                std::span<const double>(his.data(), dim));
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= h_[a];
    return v;
}

double GridSpec::domain_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= hi_[a] - lo_[a];
    return v;
}

bool GridSpec::operator==(const GridSpec& o) const {
    if (dim_ != o.dim_) return false;
    for (int a = 0; a < dim_; ++a)
        if (n_[a] != o.n_[a] || lo_[a] != o.lo_[a] || hi_[a] != o.hi_[a]) return false;
    return true;
}

GridFunction GridFunction::constant(const GridSpec& spec, Complex value) {
    GridFunction f(spec);
    for (auto& v : f.values()) v = value;
    return f;
}

GridFunction GridFunction::sample(
    const GridSpec& spec, const std::function<Complex(const std::array<double, 3>&)>& f) {
    GridFunction out(spec);
    const int dim = spec.dim();
    std::array<int, 3> idx{0, 0, 0};
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = spec.coord(a, 0);
    const std::size_t total = spec.size();
    for (std::size_t i = 0; i < total; ++i) {
        out[i] = f(x);
        // Advance the multi-index, last axis fastest.
        for (int a = dim - 1; a >= 0; --a) {
            if (++idx[a] < spec.n(a)) {
                x[a] = spec.coord(a, idx[a]);
                break;
            }
            idx[a] = 0;
            x[a] = spec.coord(a, 0);
        }
    }
    return out;
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_spec(f.spec(), g.spec(), "inner_product");
    Complex sum{0.0, 0.0};
    const auto fv = f.values();
    const auto gv = g.values();
    for (std::size_t i = 0; i < fv.size(); ++i) sum += std::conj(fv[i]) * gv[i];
    return f.spec().cell_volume() * sum;
}

Norms norms(const GridFunction& f) {
    double s2 = 0.0, s4 = 0.0, mx = 0.0;
    for (const Complex& v : f.values()) {
        const double m2 = std::norm(v);
        s2 += m2;
        s4 += m2 * m2;
        mx = std::max(mx, m2);
    }
    const double w = f.spec().cell_volume();
    return Norms{std::sqrt(w * s2), std::pow(w * s4, 0.25), std::sqrt(mx)};
}

double norm_l2(const GridFunction& f) {
    double s2 = 0.0;
    for (const Complex& v : f.values()) s2 += std::norm(v);
    return std::sqrt(f.spec().cell_volume() * s2);
}

double norm_linf(const GridFunction& f) {
    double mx = 0.0;
    for (const Complex& v : f.values()) mx = std::max(mx, std::norm(v));
    return std::sqrt(mx);
}

namespace {

// Visit every periodic line along `axis`: calls fn(base, stride, count) for
// each 1-D line of the grid, where flat indices base + j*stride, j=0..count-1
// walk the line in order.
template <typename Fn>
void for_each_line(const GridSpec& spec, int axis, Fn&& fn) {
    const std::size_t stride = spec.stride(axis);
    const int count = spec.n(axis);
    // Indices factor as outer * (count * stride) + inner.
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(spec.n(a));
    const std::size_t inner = stride;
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t block = o * (static_cast<std::size_t>(count) * stride);
        for (std::size_t i = 0; i < inner; ++i) fn(block + i, stride, count);
    }
}

}  // namespace

StaggeredField gradient(const GridFunction& f) {
    StaggeredField out(f.spec());
    const auto fv = f.values();
    for (int a = 0; a < f.spec().dim(); ++a) {
        const double inv_h = 1.0 / f.spec().h(a);
        auto& comp = out.component[a];
        for_each_line(f.spec(), a, [&](std::size_t base, std::size_t stride, int count) {
            for (int j = 0; j < count; ++j) {
                const std::size_t idx = base + static_cast<std::size_t>(j) * stride;
                const std::size_t next = (j + 1 < count) ? idx + stride : base;
                comp[idx] = (fv[next] - fv[idx]) * inv_h;
            }
        });
    }
    return out;
}

GridFunction divergence(const StaggeredField& v) {
    GridFunction out(v.spec);
    auto ov = out.values();
    for (int a = 0; a < v.spec.dim(); ++a) {
        const double inv_h = 1.0 / v.spec.h(a);
        const auto& comp = v.component[a];
        for_each_line(v.spec, a, [&](std::size_t base, std::size_t stride, int count) {
            for (int j = 0; j < count; ++j) {
                const std::size_t idx = base + static_cast<std::size_t>(j) * stride;
                const std::size_t prev =
                    (j > 0) ? idx - stride : base + static_cast<std::size_t>(count - 1) * stride;
                ov[idx] += (comp[idx] - comp[prev]) * inv_h;
            }
        });
    }
    return out;
}

GridFunction laplacian(const GridFunction& f) {
    GridFunction out(f.spec());
    const auto fv = f.values();
    auto ov = out.values();
    for (int a = 0; a < f.spec().dim(); ++a) {
        const double inv_h2 = 1.0 / (f.spec().h(a) * f.spec().h(a));
        for_each_line(f.spec(), a, [&](std::size_t base, std::size_t stride, int count) {
            for (int j = 0; j < count; ++j) {
                const std::size_t idx = base + static_cast<std::size_t>(j) * stride;
                const std::size_t next = (j + 1 < count) ? idx + stride : base;
                const std::size_t prev =
                    (j > 0) ? idx - stride : base + static_cast<std::size_t>(count - 1) * stride;
                ov[idx] += (fv[next] - 2.0 * fv[idx] + fv[prev]) * inv_h2;
            }
        });
    }
    return out;
}

GridFunction second_difference(const GridFunction& f, int axis) {
    GridFunction out(f.spec());
    const auto fv = f.values();
    auto ov = out.values();
    const double inv_h2 = 1.0 / (f.spec().h(axis) * f.spec().h(axis));
    for_each_line(f.spec(), axis, [&](std::size_t base, std::size_t stride, int count) {
        for (int j = 0; j < count; ++j) {
            const std::size_t idx = base + static_cast<std::size_t>(j) * stride;
            const std::size_t next = (j + 1 < count) ? idx + stride : base;
            const std::size_t prev =
                (j > 0) ? idx - stride : base + static_cast<std::size_t>(count - 1) * stride;
            ov[idx] = (fv[next] - 2.0 * fv[idx] + fv[prev]) * inv_h2;
        }
    });
    return out;
}

Complex staggered_inner(const StaggeredField& a, const StaggeredField& b) {
    if (a.spec != b.spec) throw ShapeError("staggered_inner: grid specs differ");
    Complex sum{0.0, 0.0};
    for (int ax = 0; ax < a.spec.dim(); ++ax) {
        const auto& av = a.component[ax];
        const auto& bv = b.component[ax];
        for (std::size_t i = 0; i < av.size(); ++i) sum += std::conj(av[i]) * bv[i];
    }
    return a.spec.cell_volume() * sum;
}

double grad_norm_sq(const GridFunction& f) {
    const StaggeredField g = gradient(f);
    double s = 0.0;
    for (int a = 0; a < f.spec().dim(); ++a)
        for (const Complex& v : g.component[a]) s += std::norm(v);
    return f.spec().cell_volume() * s;
}

SobolevNorms h1h2_norms(const GridFunction& f) {
    double l2sq = 0.0;
    for (const Complex& v : f.values()) l2sq += std::norm(v);
    l2sq *= f.spec().cell_volume();

    const double h1sq = l2sq + grad_norm_sq(f);

    double h2sq = h1sq;
    for (int a = 0; a < f.spec().dim(); ++a) {
        const GridFunction d2 = second_difference(f, a);
        const double n = norm_l2(d2);
        h2sq += n * n;
    }
    const double nl = norm_l2(laplacian(f));
    h2sq += nl * nl;

    return SobolevNorms{std::sqrt(h1sq), std::sqrt(h2sq)};
}

}  // namespace gpe
