#include "gpe/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include "gpe/spectral.hpp"

namespace gpe {

std::vector<double> estimate_orders(const std::vector<double>& errors) {
    std::vector<double> orders;
    if (errors.size() < 2) return orders;
    orders.reserve(errors.size() - 1);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        orders.push_back(std::log2(errors[i] / errors[i + 1]));
    return orders;
}

GridFunction phase_align(const GridFunction& reference, const GridFunction& g) {
    const Complex overlap = inner_product(reference, g);
    if (std::abs(overlap) == 0.0) return g;
    const Complex z = std::conj(overlap) / std::abs(overlap);
    GridFunction out = g;
    for (auto& v : out.values()) v *= z;
    return out;
}

GridFunction restrict_to_coarse(const GridFunction& fine, const GridSpec& coarse) {
    const GridSpec& fs = fine.spec();
    if (fs.dim() != coarse.dim())
        throw ShapeError("restrict_to_coarse: dimensions differ");
    for (int a = 0; a < coarse.dim(); ++a) {
        if (fs.n(a) != 2 * coarse.n(a) || fs.lo(a) != coarse.lo(a) || fs.hi(a) != coarse.hi(a))
            throw ShapeError("restrict_to_coarse: fine grid is not a 2x refinement");
    }
    GridFunction out(coarse);
    std::array<int, 3> idx{0, 0, 0};
    const int dim = coarse.dim();
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t fine_index = 0;
        for (int a = 0; a < dim; ++a)
            fine_index += static_cast<std::size_t>(2 * idx[a]) * fs.stride(a);
        out[i] = fine[fine_index];
        for (int a = dim - 1; a >= 0; --a) {
            if (++idx[a] < coarse.n(a)) break;
            idx[a] = 0;
        }
    }
    return out;
}

namespace {

struct LevelOutcome {
    GridFunction state;
    GridSpec spec;
    long steps = 0;
};

std::string level_label(const StudyPlan& plan, int level, double value) {
    return (plan.mode == StudyMode::Temporal ? "tau=" : "h=") + std::to_string(value) +
           " (level " + std::to_string(level) + ")";
}

}  // namespace

StudyReport run_study(const StudyPlan& plan) {
    if (plan.levels < 3) throw ConfigError("study: needs at least 3 levels");
    if (!plan.make_problem || !plan.make_initial)
        throw ConfigError("study: problem/initial factories not set");

    StudyReport report;
    report.mode = plan.mode;
    const bool temporal = plan.mode == StudyMode::Temporal;
    report.window_lo = temporal ? 0.8 : 1.8;
    report.window_hi = temporal ? 1.2 : 2.2;

    auto solve_level = [&](int level) -> LevelOutcome {
        std::array<int, 3> n = plan.base_n;
        SolverConfig cfg = plan.solver;
        cfg.record_history = false;
        if (temporal) {
            cfg.tau = plan.solver.tau / static_cast<double>(1 << level);
        } else {
            for (int a = 0; a < 3; ++a) n[a] *= (1 << level);
        }
        const GpeProblem problem = plan.make_problem(n);
        const GridFunction phi0 = plan.make_initial(problem);
        RunResult result = run(problem, cfg, phi0);
        const double value = temporal ? cfg.tau : problem.spec().h(0);
        if (!result.state.converged)
            throw StudyError("study: level did not converge at " +
                             level_label(plan, level, value));
        return LevelOutcome{std::move(result.state.phi), problem.spec(), result.summary.steps};
    };

    std::vector<LevelOutcome> outcomes;
    outcomes.reserve(plan.levels);
    if (plan.threads > 1) {
        // Independent levels, run in waves of at most plan.threads.
        for (int start = 0; start < plan.levels; start += plan.threads) {
            const int stop = std::min(plan.levels, start + plan.threads);
            std::vector<std::future<LevelOutcome>> futures;
            for (int level = start; level < stop; ++level)
                futures.push_back(std::async(std::launch::async, solve_level, level));
            for (auto& f : futures) outcomes.push_back(f.get());
        }
    } else {
        for (int level = 0; level < plan.levels; ++level) outcomes.push_back(solve_level(level));
    }

    for (int level = 0; level < plan.levels; ++level) {
        report.level_values.push_back(temporal ? plan.solver.tau / (1 << level)
                                               : outcomes[level].spec.h(0));
        report.level_steps.push_back(outcomes[level].steps);
    }

    for (int level = 0; level + 1 < plan.levels; ++level) {
        const GridFunction& coarse = outcomes[level].state;
        GridFunction reference = temporal
                                     ? outcomes[level + 1].state
                                     : restrict_to_coarse(outcomes[level + 1].state,
                                                          outcomes[level].spec);
        reference = phase_align(coarse, reference);
        GridFunction diff = coarse;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= reference[i];
        const Norms n = norms(diff);
        report.err_l2.push_back(n.l2);
        report.err_linf.push_back(n.linf);
    }

    const double max_err = *std::max_element(report.err_l2.begin(), report.err_l2.end());
    if (max_err <= 1e-14) {
        // All levels produced the same state to rounding; no order to measure.
        report.degenerate_exact = true;
        report.pass = true;
        return report;
    }

    report.order_l2 = estimate_orders(report.err_l2);
    report.order_linf = estimate_orders(report.err_linf);
    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    report.mean_order_l2 = mean(report.order_l2);
    report.mean_order_linf = mean(report.order_linf);
    report.pass = report.mean_order_l2 >= report.window_lo &&
                  report.mean_order_l2 <= report.window_hi &&
                  report.mean_order_linf >= report.window_lo &&
                  report.mean_order_linf <= report.window_hi;
    return report;
}

OracleResult dense_oracle(const GpeProblem& p) {
    const GridSpec& spec = p.spec();
    if (spec.dim() != 1) throw ConfigError("dense_oracle: requires dim = 1");
    if (p.beta() != 0.0) throw ConfigError("dense_oracle: requires beta = 0");
    const int n = spec.n(0);
    if (n > 1024) throw ConfigError("dense_oracle: n must be <= 1024");

    const double h = spec.h(0);
    const double diag = 1.0 / (h * h);
    const double off = -0.5 / (h * h);

    Eigen::MatrixXd hmat = Eigen::MatrixXd::Zero(n, n);
    const auto vv = p.v().values();
    for (int i = 0; i < n; ++i) {
        hmat(i, i) = diag + vv[i].real();
        const int next = (i + 1) % n;
        hmat(i, next) = off;
        hmat(next, i) = off;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hmat);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense_oracle: eigensolver failed");
    const double mu0 = solver.eigenvalues()(0);
    Eigen::VectorXd v = solver.eigenvectors().col(0);

    // Euclidean-unit -> discrete-unit, with a positive dominant entry.
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    v /= std::sqrt(h);

    const double residual = std::sqrt(h) * (hmat * v - mu0 * v).norm();
    if (residual > 1e-10)
        throw std::runtime_error("dense_oracle: eigenpair residual " + std::to_string(residual) +
                                 " exceeds 1e-10");

    OracleResult out{mu0, GridFunction(spec)};
    for (int i = 0; i < n; ++i) out.psi0[i] = Complex{v(i), 0.0};
    return out;
}

namespace {

GridFunction random_function(const GridSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction f(spec);
    for (auto& v : f.values()) v = Complex{dist(rng), dist(rng)};
    return f;
}

StaggeredField random_staggered(const GridSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StaggeredField f(spec);
    for (int a = 0; a < spec.dim(); ++a)
        for (auto& v : f.component[a]) v = Complex{dist(rng), dist(rng)};
    return f;
}

double rel_defect(Complex a, Complex b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    return std::abs(a - b) / scale;
}

}  // namespace

SuiteReport invariant_suite(const GpeProblem& p, const SolverConfig& cfg,
                            const GridFunction& phi0, int n_steps, std::uint64_t seed) {
    const EtdMultipliers mult = EtdMultipliers::build(p.spec(), cfg.tau);

    double w_mass = 0.0, w_ortho = 0.0, w_tilde = 0.0, w_pyth = 0.0;
    double w_energy = -std::numeric_limits<double>::infinity();
    double w_triangle = 0.0;
    long cond_violations = 0;
    long steps_done = 0;

    GridFunction phi = phi0;
    {
        const double n0 = norm_l2(phi);
        if (!(n0 > 0.0)) throw ConfigError("invariant_suite: initial state is zero");
        for (auto& v : phi.values()) v /= n0;
    }

    double e_prev = energy_modified(p, mult, phi);
    for (int k = 0; k < n_steps; ++k) {
        GridFunction tilde(p.spec());
        auto [next, d] = step(p, mult, cfg, phi, k, &tilde);
        ++steps_done;

        w_mass = std::max(w_mass, d.mass_defect);
        w_ortho = std::max(w_ortho, d.ortho_defect / (1.0 + d.diff_l2));
        w_tilde = std::max(w_tilde, -d.norm_drift);
        w_pyth = std::max(w_pyth, d.pythagoras_defect);
        w_energy = std::max(w_energy, d.e_h_after - e_prev - 1e-10 * (1.0 + std::abs(e_prev)));
        if (!d.condition_a_satisfied) ++cond_violations;

        // phi_tilde - phi^{n+1} = (||phi_tilde||_2 - 1) phi^{n+1}
        GridFunction tri = tilde;
        const double c = 1.0 + d.norm_drift;
        for (std::size_t i = 0; i < tri.size(); ++i) tri[i] -= c * next[i];
        w_triangle = std::max(w_triangle, norm_l2(tri));

        e_prev = d.e_h_after;
        phi = std::move(next);
        if (d.increment <= cfg.tol) break;
    }

    std::mt19937_64 rng(seed);
    const int n_random = 32;
    double w_sbp_div = 0.0, w_sbp_lap = 0.0, w_sbp_bilap = 0.0;
    double w_selfadj = 0.0, w_sqrt_pair = 0.0, w_sqrt_sq = 0.0;
    for (int k = 0; k < n_random; ++k) {
        const GridFunction psi = random_function(p.spec(), rng);
        const GridFunction chi = random_function(p.spec(), rng);
        const StaggeredField vec = random_staggered(p.spec(), rng);

        w_sbp_div = std::max(w_sbp_div, rel_defect(inner_product(psi, divergence(vec)),
                                                   -staggered_inner(gradient(psi), vec)));
        w_sbp_lap = std::max(w_sbp_lap, rel_defect(inner_product(psi, laplacian(chi)),
                                                   -staggered_inner(gradient(psi), gradient(chi))));
        w_sbp_bilap = std::max(w_sbp_bilap,
                               rel_defect(inner_product(psi, laplacian(laplacian(chi))),
                                          inner_product(laplacian(psi), laplacian(chi))));

        const GridFunction g_chi = apply(mult, Multiplier::G, chi);
        const GridFunction g_psi = apply(mult, Multiplier::G, psi);
        const GridFunction s_psi = apply(mult, Multiplier::GSqrt, psi);
        const GridFunction s_chi = apply(mult, Multiplier::GSqrt, chi);
        w_selfadj = std::max(w_selfadj,
                             rel_defect(inner_product(psi, g_chi), inner_product(g_psi, chi)));
        w_sqrt_pair = std::max(w_sqrt_pair, rel_defect(inner_product(psi, g_chi),
                                                       inner_product(s_psi, s_chi)));
        GridFunction ss = apply(mult, Multiplier::GSqrt, s_chi);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < ss.size(); ++i) {
            num += std::norm(ss[i] - g_chi[i]);
            den += std::norm(g_chi[i]);
        }
        w_sqrt_sq = std::max(w_sqrt_sq, std::sqrt(num / std::max(den, 1e-300)));
    }

    // Smoothing inequalities, both forms, with a relative rounding slack.
    long smooth_violations = 0;
    double w_smooth = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_random; ++k) {
        const GridFunction f = random_function(p.spec(), rng);
        const double l2 = norm_l2(f);
        const double lhs1 = l2 * l2;
        const double rhs1 = 0.5 * cfg.tau * gsqrt_grad_sq(mult, f);
        const GridFunction lap = laplacian(f);
        const double lap2 = norm_l2(lap);
        const double lhs2 = lap2 * lap2;
        const double rhs2 = 0.5 * cfg.tau * gsqrt_grad_sq(mult, lap);
        if (rhs1 > lhs1 * (1.0 + 1e-12)) ++smooth_violations;
        if (rhs2 > lhs2 * (1.0 + 1e-12)) ++smooth_violations;
        w_smooth = std::max({w_smooth, (rhs1 - lhs1) / std::max(lhs1, 1e-300),
                             (rhs2 - lhs2) / std::max(lhs2, 1e-300)});
    }

    SuiteReport report;
    auto add = [&](std::string name, double worst, double threshold, bool informational = false) {
        CheckResult c{std::move(name), worst, threshold, worst <= threshold, informational};
        report.checks.push_back(std::move(c));
    };
    add("mass_conservation", w_mass, 1e-13);
    add("orthogonality", w_ortho, 1e-12);
    add("tilde_norm_lower_bound", w_tilde, 1e-12);
    add("pythagoras_identity", w_pyth, 1e-12);
    add("energy_monotone", w_energy, 0.0);
    add("renormalization_triangle", w_triangle, 1e-12);
    add("condition_A_violation_fraction",
        steps_done > 0 ? static_cast<double>(cond_violations) / steps_done : 0.0, 1.0, true);
    add("sbp_divergence", w_sbp_div, 1e-12);
    add("sbp_laplacian", w_sbp_lap, 1e-12);
    add("sbp_bilaplacian", w_sbp_bilap, 1e-12);
    add("etd_self_adjoint", w_selfadj, 1e-12);
    add("etd_sqrt_pairing", w_sqrt_pair, 1e-12);
    add("etd_sqrt_square", w_sqrt_sq, 1e-12);
    add("smoothing_violations", static_cast<double>(smooth_violations), 0.0);
    add("smoothing_worst_margin", w_smooth, 0.0, true);

    report.all_pass = true;
    for (const CheckResult& c : report.checks)
        if (!c.informational && !c.pass) report.all_pass = false;
    return report;
}

}  // namespace gpe
