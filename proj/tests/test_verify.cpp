#include "doctest.h"

#include <cmath>

#include "gpe/verify.hpp"
#include "test_support.hpp"

using namespace gpe;
using gpe::test::normalized;
using gpe::test::random_function;

TEST_SUITE_BEGIN("verify");

TEST_CASE("order estimation recovers synthetic rates exactly") {
    for (double p : {1.0, 2.0}) {
        std::vector<double> errors;
        for (int l = 0; l < 5; ++l) errors.push_back(3.7 * std::pow(2.0, -p * l));
        const std::vector<double> orders = estimate_orders(errors);
        REQUIRE(orders.size() == 4);
        for (double o : orders) CHECK(o == doctest::Approx(p).epsilon(1e-13));
    }
}

TEST_CASE("phase alignment removes any global phase") {
    std::mt19937_64 rng(51);
    const GridSpec s = GridSpec::make_uniform(1, 32, 0.0, 1.0);
    const GridFunction a = normalized(random_function(s, rng));
    GridFunction b = a;
    for (auto& v : b.values()) v *= std::exp(Complex{0.0, -2.1});
    // slight perturbation so the distance is not exactly zero
    b[5] += Complex{1e-3, -2e-3};

    const GridFunction aligned = phase_align(a, b);
    GridFunction diff = a;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= aligned[i];
    const double d0 = norm_l2(diff);

    // mauling b with another phase must not change the aligned distance
    GridFunction c = b;
    for (auto& v : c.values()) v *= std::exp(Complex{0.0, 0.77});
    const GridFunction aligned2 = phase_align(a, c);
    GridFunction diff2 = a;
    for (std::size_t i = 0; i < diff2.size(); ++i) diff2[i] -= aligned2[i];
    CHECK(std::abs(norm_l2(diff2) - d0) < 1e-12 * (1.0 + d0));

    // and aligning is at least as good as not aligning
    GridFunction diff3 = a;
    for (std::size_t i = 0; i < diff3.size(); ++i) diff3[i] -= b[i];
    CHECK(d0 <= norm_l2(diff3) * (1.0 + 1e-12));
}

TEST_CASE("restriction picks the coincident fine nodes") {
    const GridSpec coarse = GridSpec::make_uniform(2, 8, -1.0, 1.0);
    const GridSpec fine = GridSpec::make_uniform(2, 16, -1.0, 1.0);
    GridFunction f(fine);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = Complex{static_cast<double>(i), 0.0};
    const GridFunction r = restrict_to_coarse(f, coarse);
    // coarse (i,j) -> fine (2i,2j)
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(r[static_cast<std::size_t>(i) * 8 + j].real() ==
                  doctest::Approx(static_cast<double>(2 * i * 16 + 2 * j)));

    const GridSpec wrong = GridSpec::make_uniform(2, 12, -1.0, 1.0);
    CHECK_THROWS_AS(restrict_to_coarse(f, wrong), ShapeError);
}

TEST_CASE("dense oracle on constant potentials") {
    const GridSpec s = GridSpec::make_uniform(1, 32, 0.0, 1.0);
    const OracleResult free = dense_oracle(GpeProblem::make(GridFunction(s), 0.0));
    CHECK(std::abs(free.mu0) < 1e-9);
    // eigenvector is constant up to sign
    for (std::size_t i = 1; i < free.psi0.size(); ++i)
        CHECK(std::abs(free.psi0[i] - free.psi0[0]) < 1e-9);

    const OracleResult shifted =
        dense_oracle(GpeProblem::make(GridFunction::constant(s, {2.5, 0.0}), 0.0));
    CHECK(shifted.mu0 == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("dense oracle matches the harmonic ground energy") {
    const GridSpec s = GridSpec::make_uniform(1, 512, -16.0, 16.0);
    const GpeProblem p = GpeProblem::make(harmonic_potential(s), 0.0);
    const OracleResult o = dense_oracle(p);
    CHECK(std::abs(o.mu0 - 0.5) <= 1e-3);  // continuum value, up to discretization
    CHECK(norm_l2(o.psi0) == doctest::Approx(1.0).epsilon(1e-12));

    // consistency with the model functionals
    CHECK(gpe_residual(p, o.psi0, o.mu0) <= 1e-10);
    const EtdMultipliers tiny_tau = EtdMultipliers::build(s, 1e-10);
    CHECK(std::abs(lambda_n(p, tiny_tau, o.psi0) - o.mu0) <= 1e-9);
}

TEST_CASE("dense oracle preconditions") {
    const GridSpec s2 = GridSpec::make_uniform(2, 8, 0.0, 1.0);
    CHECK_THROWS_AS(dense_oracle(GpeProblem::make(GridFunction(s2), 0.0)), ConfigError);
    const GridSpec s = GridSpec::make_uniform(1, 16, 0.0, 1.0);
    CHECK_THROWS_AS(dense_oracle(GpeProblem::make(GridFunction(s), 1.0)), ConfigError);
    const GridSpec big = GridSpec::make_uniform(1, 2048, 0.0, 1.0);
    CHECK_THROWS_AS(dense_oracle(GpeProblem::make(GridFunction(big), 0.0)), ConfigError);
}

TEST_CASE("invariant suite passes trivially on the free constant problem") {
    const GridSpec s = GridSpec::make_uniform(1, 16, 0.0, 1.0);
    const GpeProblem p = GpeProblem::make(GridFunction(s), 0.0);
    SolverConfig cfg;
    cfg.tau = 0.25;
    const SuiteReport r =
        invariant_suite(p, cfg, GridFunction::constant(s, {1.0, 0.0}), 50, 99);
    CHECK(r.all_pass);
}

TEST_CASE("invariant suite passes on a desk-scaled interacting run") {
    const GridSpec s = GridSpec::make_uniform(1, 128, -16.0, 16.0);
    const GpeProblem p = GpeProblem::make(harmonic_lattice_potential_1d(s), 250.0);
    SolverConfig cfg;
    cfg.tau = 0.25;
    const SuiteReport r = invariant_suite(p, cfg, initial_gaussian(s), 100, 7);
    for (const CheckResult& c : r.checks) {
        INFO(c.name, " worst=", c.worst);
        if (!c.informational) CHECK(c.pass);
    }
    CHECK(r.all_pass);
}

TEST_CASE("invariant suite flags the unstabilized scheme") {
    const GridSpec s = GridSpec::make_uniform(1, 128, -16.0, 16.0);
    const GpeProblem p = GpeProblem::make(harmonic_lattice_potential_1d(s), 250.0);
    SolverConfig cfg;
    cfg.tau = 0.25;
    cfg.stabilizer_auto = false;
    cfg.stabilizer_value = 0.0;
    const SuiteReport r = invariant_suite(p, cfg, initial_gaussian(s), 100, 7);
    CHECK_FALSE(r.all_pass);
    bool energy_failed = false;
    for (const CheckResult& c : r.checks)
        if (c.name == "energy_monotone" && !c.pass) energy_failed = true;
    CHECK(energy_failed);
}

TEST_CASE("degenerate-exact studies are flagged instead of dividing by zero") {
    StudyPlan plan;
    plan.mode = StudyMode::Temporal;
    plan.levels = 3;
    plan.solver.tau = 0.25;
    plan.base_n = {16, 0, 0};
    plan.make_problem = [](const std::array<int, 3>& n) {
        const GridSpec s = GridSpec::make_uniform(1, n[0], 0.0, 1.0);
        return GpeProblem::make(GridFunction(s), 0.0);
    };
    plan.make_initial = [](const GpeProblem& p) {
        return GridFunction::constant(p.spec(), {1.0, 0.0});
    };
    const StudyReport r = run_study(plan);
    CHECK(r.degenerate_exact);
    CHECK(r.pass);
    CHECK(r.order_l2.empty());
}

TEST_CASE("temporal study produces a decreasing error ladder") {
    StudyPlan plan;
    plan.mode = StudyMode::Temporal;
    plan.levels = 3;
    plan.solver.tau = 0.2;
    plan.solver.max_steps = 200000;
    plan.base_n = {64, 0, 0};
    plan.make_problem = [](const std::array<int, 3>& n) {
        const GridSpec s = GridSpec::make_uniform(1, n[0], -8.0, 8.0);
        return GpeProblem::make(harmonic_potential(s), 10.0);
    };
    plan.make_initial = [](const GpeProblem& p) { return initial_gaussian(p.spec()); };
    const StudyReport r = run_study(plan);
    REQUIRE(r.err_l2.size() == 2);
    REQUIRE(r.order_l2.size() == 1);
    CHECK(r.err_l2[0] > r.err_l2[1]);
    CHECK(r.err_linf[0] > r.err_linf[1]);
    CHECK(r.level_values[0] == doctest::Approx(0.2));
    CHECK(r.level_values[1] == doctest::Approx(0.1));
}

TEST_CASE("studies propagate level failures with the level named") {
    StudyPlan plan;
    plan.mode = StudyMode::Temporal;
    plan.levels = 3;
    plan.solver.tau = 0.2;
    plan.solver.max_steps = 3;  // cannot converge
    plan.base_n = {32, 0, 0};
    plan.make_problem = [](const std::array<int, 3>& n) {
        const GridSpec s = GridSpec::make_uniform(1, n[0], -8.0, 8.0);
        return GpeProblem::make(harmonic_potential(s), 10.0);
    };
    plan.make_initial = [](const GpeProblem& p) { return initial_gaussian(p.spec()); };
    CHECK_THROWS_AS(run_study(plan), StudyError);
}

TEST_SUITE_END();
