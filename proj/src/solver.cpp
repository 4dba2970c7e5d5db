#include "gpe/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gpe/spectral.hpp"

namespace gpe {

namespace {

void validate(const SolverConfig& cfg) {
    if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau))
        throw ConfigError("solver: tau must be positive and finite");
    if (!(cfg.tol > 0.0)) throw ConfigError("solver: tol must be positive");
    if (cfg.max_steps < 1) throw ConfigError("solver: max_steps must be >= 1");
    if (!cfg.stabilizer_auto && !(cfg.stabilizer_value >= 0.0))
        throw ConfigError("solver: fixed stabilizer must be >= 0");
}

// The whole update in one pass over the grid; returns phi^{n+1} and all
// diagnostics except the energies of phi^{n+1} (chained by the caller).
std::pair<GridFunction, StepDiagnostics> step_core(const GpeProblem& p,
                                                   const EtdMultipliers& mult,
                                                   const SolverConfig& cfg,
                                                   const GridFunction& phi,
                                                   long step_index,
                                                   GridFunction* tilde_out) {
    const GridSpec& spec = p.spec();
    if (phi.spec() != spec || mult.spec() != spec)
        throw ShapeError("step: grid specs differ");

    const std::size_t total = spec.size();
    const double w = spec.cell_volume();
    const double beta = p.beta();
    const auto vv = p.v().values();
    const auto pv = phi.values();

    // One forward transform feeds both the multiplier norm behind lambda^n
    // and the smoothed diffusion term.
    std::vector<Complex> hat = dft_forward(phi);
    double gg_sum = 0.0;
    {
        const auto& g = mult.g();
        const auto& lam = mult.lam();
        const auto& gdelta = mult.gdelta();
        for (std::size_t i = 0; i < total; ++i) {
            gg_sum += g[i] * lam[i] * std::norm(hat[i]);
            hat[i] *= gdelta[i];
        }
    }
    const double gg = gg_sum * w / static_cast<double>(total);
    const GridFunction gdel = dft_inverse(spec, hat);  // G_h Delta_h phi^n

    double pot = 0.0, quart = 0.0, phi_inf_sq = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        const double m2 = std::norm(pv[i]);
        pot += vv[i].real() * m2;
        quart += m2 * m2;
        phi_inf_sq = std::max(phi_inf_sq, m2);
    }
    pot *= w;
    quart *= w;

    StepDiagnostics d;
    d.step = step_index;
    d.lambda = 0.5 * gg + pot + beta * quart;
    d.e_h_before = 0.5 * gg + pot + 0.5 * beta * quart;
    d.stabilizer = cfg.stabilizer_auto
                       ? 1.5 * beta * phi_inf_sq + 0.5 * p.v_inf() + 1.0
                       : cfg.stabilizer_value;

    // phi_tilde = phi + (1/tau + A)^{-1} [ 1/2 G_h Delta_h phi - V phi
    //                                      - beta |phi|^2 phi + lambda phi ]
    const double c = 1.0 / (1.0 / cfg.tau + d.stabilizer);
    GridFunction tilde(spec);
    auto tv = tilde.values();
    const auto gv = gdel.values();
    double nt2 = 0.0, diff2 = 0.0, tilde_inf_sq = 0.0;
    Complex ortho{0.0, 0.0};
    for (std::size_t i = 0; i < total; ++i) {
        const Complex rhs = 0.5 * gv[i] +
                            (d.lambda - vv[i].real() - beta * std::norm(pv[i])) * pv[i];
        const Complex t = pv[i] + c * rhs;
        tv[i] = t;
        const Complex dt = t - pv[i];
        nt2 += std::norm(t);
        diff2 += std::norm(dt);
        tilde_inf_sq = std::max(tilde_inf_sq, std::norm(t));
        ortho += std::conj(dt) * pv[i];
    }
    nt2 *= w;
    diff2 *= w;
    ortho *= w;

    if (!std::isfinite(nt2) || !(nt2 > 0.0))
        throw DivergenceError("solver: non-finite intermediate profile at step " +
                              std::to_string(step_index));

    const double tilde_norm = std::sqrt(nt2);
    d.norm_drift = tilde_norm - 1.0;
    d.diff_l2 = std::sqrt(diff2);
    d.ortho_defect = std::abs(ortho);
    d.pythagoras_defect = std::abs(nt2 - 1.0 - diff2);
    d.condition_a_satisfied =
        d.stabilizer >= beta * (0.5 * tilde_inf_sq + phi_inf_sq) + 0.5 * p.v_inf();

    GridFunction next(spec);
    auto nv = next.values();
    const double inv_norm = 1.0 / tilde_norm;
    double inc_inf_sq = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        nv[i] = tv[i] * inv_norm;
        inc_inf_sq = std::max(inc_inf_sq, std::norm(nv[i] - pv[i]));
        mass += std::norm(nv[i]);
    }
    d.increment = std::sqrt(inc_inf_sq) / cfg.tau;
    d.mass_defect = std::abs(std::sqrt(mass * w) - 1.0);

    if (tilde_out) *tilde_out = std::move(tilde);
    return {std::move(next), d};
}

}  // namespace

double resolve_stabilizer(const SolverConfig& cfg, const GpeProblem& p, const GridFunction& phi) {
    return cfg.stabilizer_auto ? stabilizer_auto(p, phi) : cfg.stabilizer_value;
}

std::pair<GridFunction, StepDiagnostics> step(const GpeProblem& p, const EtdMultipliers& mult,
                                              const SolverConfig& cfg, const GridFunction& phi_n,
                                              long step_index, GridFunction* tilde_out) {
    validate(cfg);
    auto [next, d] = step_core(p, mult, cfg, phi_n, step_index, tilde_out);
    d.e_h_after = energy_modified(p, mult, next);
    d.e_std_after = energy_standard(p, next);
    return {std::move(next), d};
}

RunResult run(const GpeProblem& p, const SolverConfig& cfg, const GridFunction& phi0) {
    validate(cfg);
    if (phi0.spec() != p.spec()) throw ShapeError("run: grid specs differ");
    const double n0 = norm_l2(phi0);
    if (!(n0 > 0.0) || !std::isfinite(n0))
        throw ConfigError("run: initial state must be nonzero and finite");

    const auto t_start = std::chrono::steady_clock::now();
    const EtdMultipliers mult = EtdMultipliers::build(p.spec(), cfg.tau);

    GridFunction phi = phi0;
    {
        const double inv = 1.0 / n0;
        for (auto& v : phi.values()) v *= inv;
    }

    RunResult result{SolverState{phi, 0, false}, {}, {}};
    if (cfg.record_history) result.history.reserve(256);

    // No new best increment within this many steps means the run stalled.
    constexpr long kStagnationWindow = 10000;
    double best_increment = std::numeric_limits<double>::infinity();
    long since_best = 0;

    long steps_taken = 0;
    double last_increment = 0.0;
    for (long n = 0; n < cfg.max_steps; ++n) {
        auto [next, d] = step_core(p, mult, cfg, phi, n, nullptr);
        phi = std::move(next);
        steps_taken = n + 1;
        last_increment = d.increment;

        if (cfg.record_history) {
            if (!result.history.empty()) result.history.back().e_h_after = d.e_h_before;
            d.e_std_after = energy_standard(p, phi);
            result.history.push_back(d);
        }

        if (d.increment <= cfg.tol) {
            result.state.converged = true;
            break;
        }
        if (d.increment < best_increment) {
            best_increment = d.increment;
            since_best = 0;
        } else if (++since_best >= kStagnationWindow) {
            break;
        }
    }

    result.state.phi = phi;
    result.state.step = steps_taken;

    RunSummary& s = result.summary;
    s.converged = result.state.converged;
    s.steps = steps_taken;
    s.energy_modified = energy_modified(p, mult, phi);
    s.energy_standard = energy_standard(p, phi);
    s.lambda = lambda_n(p, mult, phi);
    s.gpe_residual = gpe_residual(p, phi, s.lambda);
    s.final_increment = last_increment;
    if (cfg.record_history && !result.history.empty())
        result.history.back().e_h_after = s.energy_modified;
    s.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

GridFunction initial_gaussian(const GridSpec& spec) {
    const double scale = std::pow(M_PI, -0.25 * spec.dim());
    return GridFunction::sample(spec, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < spec.dim(); ++a) r2 += x[a] * x[a];
        return Complex{scale * std::exp(-0.5 * r2), 0.0};
    });
}

GridFunction initial_exp_neg_v(const GpeProblem& p) {
    GridFunction out(p.spec());
    const auto vv = p.v().values();
    auto ov = out.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = Complex{std::exp(-vv[i].real()), 0.0};
    return out;
}

}  // namespace gpe
