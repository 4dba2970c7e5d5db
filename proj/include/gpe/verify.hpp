#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpe/solver.hpp"

namespace gpe {

/// Thrown when a refinement level of a convergence study fails.
struct StudyError : std::runtime_error {
    explicit StudyError(const std::string& what) : std::runtime_error(what) {}
};

enum class StudyMode { Temporal, Spatial };

/// Refinement study description. Levels halve tau (temporal) or h (spatial,
/// by doubling the points per axis); each level is an independent ground
/// state solve and the next-finer level serves as its reference.
struct StudyPlan {
    StudyMode mode = StudyMode::Temporal;
    int levels = 4;  // >= 3
    SolverConfig solver;  // solver.tau is the coarsest tau (temporal) or the fixed tau (spatial)
    std::array<int, 3> base_n{};  // coarsest points per axis

    /// Builds the problem on a grid with the given points per axis (the box
    /// and potential stay fixed; spatial mode resamples on finer grids).
    std::function<GpeProblem(const std::array<int, 3>&)> make_problem;
    /// Initial profile for a level's problem.
    std::function<GridFunction(const GpeProblem&)> make_initial;

    int threads = 1;  // levels are independent and may run concurrently
};

struct StudyReport {
    StudyMode mode = StudyMode::Temporal;
    std::vector<double> level_values;  // tau or h per level
    std::vector<long> level_steps;     // solver steps per level
    std::vector<double> err_l2;        // size L-1, level vs next-finer reference
    std::vector<double> err_linf;
    std::vector<double> order_l2;      // size L-2
    std::vector<double> order_linf;
    double mean_order_l2 = 0.0;
    double mean_order_linf = 0.0;
    double window_lo = 0.0;  // accepted mean-order window
    double window_hi = 0.0;
    bool degenerate_exact = false;  // all errors at rounding level; orders skipped
    bool pass = false;
};

/// Observed orders log2(e_l / e_{l+1}) of a halving error sequence.
std::vector<double> estimate_orders(const std::vector<double>& errors);

/// Multiply g by the unit phase that minimizes || reference - e^{i t} g ||_2.
GridFunction phase_align(const GridFunction& reference, const GridFunction& g);

/// Point restriction of a 2x-refined state onto the coarse grid (coincident
/// nodes; both grids must share lo/hi and n_fine = 2 n_coarse per axis).
GridFunction restrict_to_coarse(const GridFunction& fine, const GridSpec& coarse);

StudyReport run_study(const StudyPlan& plan);

struct OracleResult {
    double mu0 = 0.0;     // smallest eigenvalue of -1/2 lap_h + diag(V)
    GridFunction psi0;    // its unit-L2 eigenvector
};

/// Dense symmetric eigensolve of the linear (beta = 0) 1-D problem; the
/// independent reference for the solver. Requires dim = 1, beta = 0, n <= 1024.
OracleResult dense_oracle(const GpeProblem& p);

struct CheckResult {
    std::string name;
    double worst = 0.0;      // worst observed defect
    double threshold = 0.0;  // pass iff worst <= threshold
    bool pass = false;
    bool informational = false;  // logged, never fails the suite
};

struct SuiteReport {
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

/// Runs n_steps of the scheme asserting the per-step identities (mass,
/// orthogonality, intermediate-norm bound, Pythagoras, energy monotonicity,
/// renormalization triangle, stabilizer condition log) plus static randomized
/// operator checks (summation by parts, ETD self-adjointness, smoothing
/// inequalities) on the problem's grid.
SuiteReport invariant_suite(const GpeProblem& p, const SolverConfig& cfg,
                            const GridFunction& phi0, int n_steps, std::uint64_t seed = 12345);

}  // namespace gpe
