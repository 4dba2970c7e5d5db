#pragma once

#include <vector>

#include "gpe/grid.hpp"

namespace gpe {

/// phi_1(x) = (1 - exp(-x))/x for x >= 0, with phi_1(0) = 1.
/// Switches to a 4-term Taylor expansion below x = 1e-4 where the direct
/// formula cancels. Throws ConfigError for x < 0.
double phi1(double x);

enum class Multiplier {
    G,       // phi_1(tau*lambda/2), the ETD smoother
    GSqrt,   // its elementwise square root
    GDelta,  // -lambda * phi_1(tau*lambda/2), the smoothed Laplacian
};

/// Fourier multipliers diagonalizing the periodic finite-difference Laplacian
/// and the ETD operator built on it, precomputed once per (grid, tau).
///
/// Mode eigenvalues: lam_k = sum_a (4/h_a^2) sin^2(pi k_a / n_a), indexed in
/// DFT output order (sin^2 is symmetric under k -> n-k, so no reshuffling).
class EtdMultipliers {
public:
    static EtdMultipliers build(const GridSpec& spec, double tau);

    const GridSpec& spec() const { return spec_; }
    double tau() const { return tau_; }

    const std::vector<double>& lam() const { return lam_; }
    const std::vector<double>& g() const { return g_; }
    const std::vector<double>& gsqrt() const { return gsqrt_; }
    const std::vector<double>& gdelta() const { return gdelta_; }

private:
    EtdMultipliers() = default;

    GridSpec spec_;
    double tau_ = 0.0;
    std::vector<double> lam_, g_, gsqrt_, gdelta_;
};

/// Unnormalized forward DFT of the grid values (the inverse carries 1/N).
std::vector<Complex> dft_forward(const GridFunction& f);

/// Inverse DFT, scaled by 1/prod(n); round-trips dft_forward.
GridFunction dft_inverse(const GridSpec& spec, std::span<const Complex> hat);

/// Apply one of the precomputed multipliers: forward DFT, scale modes,
/// inverse DFT. Throws ShapeError if the function lives on another grid.
GridFunction apply(const EtdMultipliers& mult, Multiplier which, const GridFunction& f);

/// || G_h^{1/2} grad_h f ||_2^2 evaluated by Parseval as
/// (h^d / N) * sum_k phi_1(tau lam_k / 2) lam_k |f_hat_k|^2.
double gsqrt_grad_sq(const EtdMultipliers& mult, const GridFunction& f);

}  // namespace gpe
