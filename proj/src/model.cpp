#include "gpe/model.hpp"

#include <cmath>

namespace gpe {

namespace {

// <V phi, phi> and ||phi||_4^4, both h^d-weighted, in one sweep.
struct PotentialSums {
    double potential;
    double quartic;
};

PotentialSums potential_sums(const GpeProblem& p, const GridFunction& phi) {
    if (phi.spec() != p.spec()) throw ShapeError("potential_sums: grid specs differ");
    double pot = 0.0, quart = 0.0;
    const auto vv = p.v().values();
    const auto pv = phi.values();
    for (std::size_t i = 0; i < pv.size(); ++i) {
        const double m2 = std::norm(pv[i]);
        pot += vv[i].real() * m2;
        quart += m2 * m2;
    }
    const double w = p.spec().cell_volume();
    return PotentialSums{w * pot, w * quart};
}

}  // namespace

GpeProblem GpeProblem::make(GridFunction v, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ConfigError("GpeProblem: beta must be finite and >= 0");
    double v_inf = 0.0;
    for (const Complex& val : v.values()) {
        if (std::abs(val.imag()) > 1e-15)
            throw ConfigError("GpeProblem: potential must be real-valued");
        if (!std::isfinite(val.real()))
            throw ConfigError("GpeProblem: potential contains non-finite samples");
        v_inf = std::max(v_inf, std::abs(val.real()));
    }
    return GpeProblem(std::move(v), beta, v_inf);
}

GridFunction harmonic_potential(const GridSpec& spec, double omega) {
    return GridFunction::sample(spec, [&](const std::array<double, 3>& x) {
        double v = 0.0;
        for (int a = 0; a < spec.dim(); ++a) v += (omega * x[a]) * (omega * x[a]);
        return Complex{0.5 * v, 0.0};
    });
}

GridFunction harmonic_lattice_potential_1d(const GridSpec& spec, double amplitude,
                                           double period) {
    if (spec.dim() != 1)
        throw ConfigError("harmonic_lattice_potential_1d: requires dim = 1");
    return GridFunction::sample(spec, [&](const std::array<double, 3>& x) {
        const double s = std::sin(M_PI * x[0] / period);
        return Complex{0.5 * x[0] * x[0] + amplitude * s * s, 0.0};
    });
}

double energy_modified(const GpeProblem& p, const EtdMultipliers& mult, const GridFunction& phi) {
    const PotentialSums s = potential_sums(p, phi);
    return 0.5 * gsqrt_grad_sq(mult, phi) + s.potential + 0.5 * p.beta() * s.quartic;
}

double energy_standard(const GpeProblem& p, const GridFunction& phi) {
    const PotentialSums s = potential_sums(p, phi);
    return 0.5 * grad_norm_sq(phi) + s.potential + 0.5 * p.beta() * s.quartic;
}

double lambda_n(const GpeProblem& p, const EtdMultipliers& mult, const GridFunction& phi) {
    const PotentialSums s = potential_sums(p, phi);
    return 0.5 * gsqrt_grad_sq(mult, phi) + s.potential + p.beta() * s.quartic;
}

double gpe_residual(const GpeProblem& p, const GridFunction& phi, double mu) {
    if (phi.spec() != p.spec()) throw ShapeError("gpe_residual: grid specs differ");
    GridFunction r = laplacian(phi);
    const auto vv = p.v().values();
    const auto pv = phi.values();
    auto rv = r.values();
    const double beta = p.beta();
    for (std::size_t i = 0; i < rv.size(); ++i)
        rv[i] = -0.5 * rv[i] + (vv[i].real() + beta * std::norm(pv[i]) - mu) * pv[i];
    return norm_l2(r);
}

double stabilizer_auto(const GpeProblem& p, const GridFunction& phi) {
    const double phi_inf = norm_linf(phi);
    return 1.5 * p.beta() * phi_inf * phi_inf + 0.5 * p.v_inf() + 1.0;
}

}  // namespace gpe
