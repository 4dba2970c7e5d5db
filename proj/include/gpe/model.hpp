#pragma once

#include <string>

#include "gpe/grid.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

/// Discrete Gross-Pitaevskii problem: sampled trapping potential V, repulsion
/// strength beta, and the grid they live on. Immutable after construction.
class GpeProblem {
public:
    /// Validates that V is real-valued (|Im| <= 1e-15) and beta >= 0;
    /// caches max |V| over the grid samples.
    static GpeProblem make(GridFunction v, double beta);

    const GridSpec& spec() const { return v_.spec(); }
    const GridFunction& v() const { return v_; }
    double beta() const { return beta_; }
    double v_inf() const { return v_inf_; }

private:
    GpeProblem(GridFunction v, double beta, double v_inf)
        : v_(std::move(v)), beta_(beta), v_inf_(v_inf) {}

    GridFunction v_;
    double beta_;
    double v_inf_;
};

/// V(x) = 1/2 * sum_a (omega * x_a)^2.
GridFunction harmonic_potential(const GridSpec& spec, double omega = 1.0);

/// V(x) = x^2/2 + amplitude * sin^2(pi x / period); 1-D only.
GridFunction harmonic_lattice_potential_1d(const GridSpec& spec, double amplitude = 25.0,
                                           double period = 4.0);

/// Modified energy whose gradient term is filtered by G_h^{1/2}:
/// E_h(phi) = 1/2 ||G^{1/2} grad phi||^2 + <V phi, phi> + beta/2 <|phi|^2 phi, phi>.
double energy_modified(const GpeProblem& p, const EtdMultipliers& mult, const GridFunction& phi);

/// Plain discrete energy 1/2 ||grad phi||^2 + <V phi, phi> + beta/2 ||phi||_4^4.
/// Diagnostic; approaches energy_modified as tau -> 0.
double energy_standard(const GpeProblem& p, const GridFunction& phi);

/// Lagrange multiplier of the constrained flow,
/// lambda = 1/2 ||G^{1/2} grad phi||^2 + <V phi + beta |phi|^2 phi, phi>.
/// Intended for unit-L2 phi; no renormalization happens inside.
double lambda_n(const GpeProblem& p, const EtdMultipliers& mult, const GridFunction& phi);

/// || -1/2 lap phi + V phi + beta |phi|^2 phi - mu phi ||_2, the residual of
/// the stationary eigenproblem.
double gpe_residual(const GpeProblem& p, const GridFunction& phi, double mu);

/// Reference stabilizer A = (3 beta / 2) ||phi||_inf^2 + 1/2 ||V||_inf + 1.
double stabilizer_auto(const GpeProblem& p, const GridFunction& phi);

}  // namespace gpe
