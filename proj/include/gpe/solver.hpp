#pragma once

#include <vector>

#include "gpe/model.hpp"

namespace gpe {

/// Thrown when an iterate turns non-finite (absurd tau / stabilizer choices).
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverConfig {
    double tau = 0.25;
    bool stabilizer_auto = true;   // auto: refreshed from phi^n each step
    double stabilizer_value = 0.0; // used when stabilizer_auto is false
    double tol = 1e-8;             // on ||phi^{n+1} - phi^n||_inf / tau
    long max_steps = 100000;
    bool record_history = false;
};

/// Per-step record of every identity the scheme is supposed to satisfy.
struct StepDiagnostics {
    long step = 0;
    double e_h_before = 0.0;
    double e_h_after = 0.0;    // filled by step(); chained cheaply by run()
    double e_std_after = 0.0;  // plain-gradient energy of phi^{n+1}
    double lambda = 0.0;       // lambda^n, from phi^n
    double stabilizer = 0.0;   // A used this step
    double norm_drift = 0.0;   // ||phi_tilde||_2 - 1
    double ortho_defect = 0.0; // |<phi_tilde - phi^n, phi^n>|
    double pythagoras_defect = 0.0;
    double diff_l2 = 0.0;      // ||phi_tilde - phi^n||_2
    double increment = 0.0;    // ||phi^{n+1} - phi^n||_inf / tau
    double mass_defect = 0.0;  // | ||phi^{n+1}||_2 - 1 |
    bool condition_a_satisfied = false;
};

struct SolverState {
    GridFunction phi;
    long step = 0;
    bool converged = false;
};

struct RunSummary {
    bool converged = false;
    long steps = 0;
    double energy_modified = 0.0;
    double energy_standard = 0.0;
    double lambda = 0.0;  // chemical potential of the final state
    double gpe_residual = 0.0;
    double final_increment = 0.0;
    double wall_seconds = 0.0;
};

struct RunResult {
    SolverState state;
    std::vector<StepDiagnostics> history;  // empty unless cfg.record_history
    RunSummary summary;
};

double resolve_stabilizer(const SolverConfig& cfg, const GpeProblem& p, const GridFunction& phi);

/// One step of the two-stage scheme: explicit stabilized ETD update to the
/// intermediate profile, then L2 renormalization. Expects ||phi_n||_2 = 1.
/// If tilde_out is non-null it receives the intermediate profile.
std::pair<GridFunction, StepDiagnostics> step(const GpeProblem& p, const EtdMultipliers& mult,
                                              const SolverConfig& cfg, const GridFunction& phi_n,
                                              long step_index = 0,
                                              GridFunction* tilde_out = nullptr);

/// Iterate from phi0 (renormalized first) until the increment criterion or
/// max_steps. A stagnation guard stops runs whose increment has not improved
/// for 10000 consecutive steps.
RunResult run(const GpeProblem& p, const SolverConfig& cfg, const GridFunction& phi0);

/// exp(-|x|^2/2) / pi^{d/4}, the reference initial profile (not normalized
/// on the grid; run() renormalizes).
GridFunction initial_gaussian(const GridSpec& spec);

/// exp(-V(x)), the trap-adapted initial profile.
GridFunction initial_exp_neg_v(const GpeProblem& p);

}  // namespace gpe
