#pragma once

#include <random>

#include "gpe/grid.hpp"

namespace gpe::test {

inline GridFunction random_function(const GridSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction f(spec);
    for (auto& v : f.values()) v = Complex{dist(rng), dist(rng)};
    return f;
}

inline GridFunction random_real_function(const GridSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction f(spec);
    for (auto& v : f.values()) v = Complex{dist(rng), 0.0};
    return f;
}

inline StaggeredField random_staggered(const GridSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StaggeredField f(spec);
    for (int a = 0; a < spec.dim(); ++a)
        for (auto& v : f.component[a]) v = Complex{dist(rng), dist(rng)};
    return f;
}

inline double rel_err(Complex a, Complex b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    return std::abs(a - b) / scale;
}

inline double rel_err(double a, double b) { return rel_err(Complex{a, 0}, Complex{b, 0}); }

/// Periodic shift by one point along an axis (f'(i) = f(i+1 mod n)).
inline GridFunction shift_one(const GridFunction& f, int axis) {
    const GridSpec& spec = f.spec();
    GridFunction out(spec);
    const std::size_t stride = spec.stride(axis);
    const int count = spec.n(axis);
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(spec.n(a));
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t block = o * (static_cast<std::size_t>(count) * stride);
        for (std::size_t i = 0; i < stride; ++i) {
            for (int j = 0; j < count; ++j) {
                const std::size_t src =
                    block + i + static_cast<std::size_t>((j + 1) % count) * stride;
                out[block + i + static_cast<std::size_t>(j) * stride] = f[src];
            }
        }
    }
    return out;
}

inline GridFunction normalized(GridFunction f) {
    const double n = norm_l2(f);
    for (auto& v : f.values()) v /= n;
    return f;
}

}  // namespace gpe::test
