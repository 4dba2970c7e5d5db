#include "doctest.h"

#include <cmath>

#include "gpe/model.hpp"
#include "test_support.hpp"

using namespace gpe;
using gpe::test::normalized;
using gpe::test::random_function;
using gpe::test::rel_err;

TEST_SUITE_BEGIN("model");

namespace {

GpeProblem constant_problem(const GridSpec& spec, double v, double beta) {
    return GpeProblem::make(GridFunction::constant(spec, {v, 0.0}), beta);
}

}  // namespace

TEST_CASE("GpeProblem validation") {
    const GridSpec s = GridSpec::make_uniform(1, 8, 0.0, 1.0);
    CHECK_THROWS_AS(GpeProblem::make(GridFunction::constant(s, {1.0, 1e-3}), 1.0), ConfigError);
    CHECK_THROWS_AS(GpeProblem::make(GridFunction(s), -1.0), ConfigError);
    const GpeProblem p = GpeProblem::make(GridFunction::constant(s, {-3.5, 0.0}), 0.0);
    CHECK(p.v_inf() == 3.5);
}

TEST_CASE("energies of constant states") {
    // unit box, phi = |Omega|^{-1/2} so that ||phi||_2 = 1
    const GridSpec s = GridSpec::make_uniform(1, 16, 0.0, 1.0);
    const EtdMultipliers m = EtdMultipliers::build(s, 0.1);
    const GridFunction phi = GridFunction::constant(s, {1.0, 0.0});

    CHECK(energy_modified(constant_problem(s, 0.0, 0.0), m, phi) == doctest::Approx(0.0));
    CHECK(energy_standard(constant_problem(s, 0.0, 0.0), phi) == doctest::Approx(0.0));

    CHECK(energy_modified(constant_problem(s, 1.0, 0.0), m, phi) == doctest::Approx(1.0));
    CHECK(energy_standard(constant_problem(s, 1.0, 0.0), phi) == doctest::Approx(1.0));

    // beta/2 * ||phi||_4^4 = 1 for beta = 2 on the unit box
    CHECK(energy_modified(constant_problem(s, 0.0, 2.0), m, phi) == doctest::Approx(1.0));
    CHECK(energy_standard(constant_problem(s, 0.0, 2.0), phi) == doctest::Approx(1.0));
}

TEST_CASE("standard energy dominates the modified energy") {
    std::mt19937_64 rng(31);
    const GridSpec s = GridSpec::make_uniform(1, 32, -4.0, 4.0);
    const EtdMultipliers m = EtdMultipliers::build(s, 0.5);
    const GpeProblem p = GpeProblem::make(harmonic_potential(s), 3.0);
    for (int k = 0; k < 100; ++k) {
        const GridFunction phi = random_function(s, rng);
        const double es = energy_standard(p, phi);
        const double em = energy_modified(p, m, phi);
        CHECK(em <= es * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("energies agree as tau -> 0 on a smooth state") {
    const GridSpec s = GridSpec::make_uniform(1, 32, 0.0, 1.0);
    const EtdMultipliers m = EtdMultipliers::build(s, 1e-8);
    const GpeProblem p = constant_problem(s, 0.0, 1.0);
    const GridFunction phi = GridFunction::sample(s, [](const std::array<double, 3>& x) {
        return Complex{1.0 + 0.3 * std::sin(2.0 * M_PI * x[0]), 0.0};
    });
    const double es = energy_standard(p, phi);
    const double em = energy_modified(p, m, phi);
    CHECK(std::abs(es - em) <= 1e-6 * (1.0 + std::abs(es)));
}

TEST_CASE("lambda on constant states") {
    const GridSpec s = GridSpec::make_uniform(1, 16, 0.0, 1.0);
    const EtdMultipliers m = EtdMultipliers::build(s, 0.1);
    const GridFunction phi = GridFunction::constant(s, {1.0, 0.0});
    CHECK(lambda_n(constant_problem(s, 0.0, 0.0), m, phi) == doctest::Approx(0.0));
    CHECK(lambda_n(constant_problem(s, 4.25, 0.0), m, phi) == doctest::Approx(4.25));
}

TEST_CASE("0 <= lambda <= 2 E_h for unit-norm states, V >= 0") {
    std::mt19937_64 rng(32);
    const GridSpec s = GridSpec::make_uniform(1, 32, -4.0, 4.0);
    const EtdMultipliers m = EtdMultipliers::build(s, 0.25);
    const GpeProblem p = GpeProblem::make(harmonic_potential(s), 5.0);
    for (int k = 0; k < 50; ++k) {
        const GridFunction phi = normalized(random_function(s, rng));
        const double lam = lambda_n(p, m, phi);
        const double eh = energy_modified(p, m, phi);
        CHECK(lam >= 0.0);
        CHECK(lam <= 2.0 * eh * (1.0 + 1e-12));
    }
}

TEST_CASE("gpe residual vanishes on eigenstates of constant problems") {
    const GridSpec s = GridSpec::make_uniform(1, 16, 0.0, 1.0);
    const GridFunction phi = GridFunction::constant(s, {1.0, 0.0});
    CHECK(gpe_residual(constant_problem(s, 0.0, 0.0), phi, 0.0) == doctest::Approx(0.0));
    CHECK(gpe_residual(constant_problem(s, 2.5, 0.0), phi, 2.5) ==
          doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("stabilizer reference value") {
    const GridSpec s = GridSpec::make_uniform(1, 16, 0.0, 1.0);
    const GridFunction phi = GridFunction::constant(s, {1.0, 0.0});
    CHECK(stabilizer_auto(constant_problem(s, 0.0, 0.0), phi) == doctest::Approx(1.0));
    // 3*250/2 * 1 + 153/2 + 1
    CHECK(stabilizer_auto(constant_problem(s, 153.0, 250.0), phi) == doctest::Approx(452.5));
}

TEST_CASE("stabilizer dominates the energy-stability bound when the profile shrinks") {
    std::mt19937_64 rng(33);
    const GridSpec s = GridSpec::make_uniform(1, 32, -2.0, 2.0);
    const GpeProblem p = GpeProblem::make(harmonic_potential(s), 7.0);
    for (int k = 0; k < 50; ++k) {
        const GridFunction phi = random_function(s, rng);
        GridFunction tilde = random_function(s, rng);
        // force || tilde ||_inf <= || phi ||_inf
        const double scale = norm_linf(phi) / (norm_linf(tilde) + 1e-300);
        for (auto& v : tilde.values()) v *= 0.9 * scale;
        const double a_ref = stabilizer_auto(p, phi);
        const double pinf = norm_linf(phi);
        const double tinf = norm_linf(tilde);
        const double needed = p.beta() * (0.5 * tinf * tinf + pinf * pinf) + 0.5 * p.v_inf();
        CHECK(a_ref >= needed);
    }
}

TEST_CASE("functionals are phase invariant") {
    std::mt19937_64 rng(34);
    const GridSpec s = GridSpec::make_uniform(1, 32, -4.0, 4.0);
    const EtdMultipliers m = EtdMultipliers::build(s, 0.2);
    const GpeProblem p = GpeProblem::make(harmonic_potential(s), 2.0);
    const GridFunction phi = normalized(random_function(s, rng));
    GridFunction rotated = phi;
    const Complex z = std::exp(Complex{0.0, 0.8317});
    for (auto& v : rotated.values()) v *= z;

    CHECK(rel_err(energy_modified(p, m, phi), energy_modified(p, m, rotated)) < 1e-12);
    CHECK(rel_err(energy_standard(p, phi), energy_standard(p, rotated)) < 1e-12);
    CHECK(rel_err(lambda_n(p, m, phi), lambda_n(p, m, rotated)) < 1e-12);
}

TEST_CASE("modified energy equals the sum of its independently computed parts") {
    std::mt19937_64 rng(35);
    const GridSpec s = GridSpec::make_uniform(2, 12, -2.0, 2.0);
    const EtdMultipliers m = EtdMultipliers::build(s, 0.15);
    const GpeProblem p = GpeProblem::make(harmonic_potential(s), 4.0);
    for (int k = 0; k < 10; ++k) {
        const GridFunction phi = random_function(s, rng);
        GridFunction vphi = phi;
        for (std::size_t i = 0; i < vphi.size(); ++i) vphi[i] *= p.v()[i].real();
        GridFunction cubic = phi;
        for (std::size_t i = 0; i < cubic.size(); ++i) cubic[i] *= std::norm(phi[i]);

        const double direct = energy_modified(p, m, phi);
        const double parts = 0.5 * gsqrt_grad_sq(m, phi) + inner_product(vphi, phi).real() +
                             0.5 * p.beta() * inner_product(cubic, phi).real();
        CHECK(rel_err(direct, parts) < 1e-13);
    }
}

TEST_CASE("potential presets") {
    const GridSpec s1 = GridSpec::make_uniform(1, 8, -4.0, 4.0);
    const GridFunction vh = harmonic_potential(s1);
    CHECK(vh[0].real() == doctest::Approx(8.0));  // x = -4 -> x^2/2 = 8

    const GridFunction vl = harmonic_lattice_potential_1d(s1);
    // x = -2: x^2/2 + 25 sin^2(-pi/2) = 2 + 25
    CHECK(vl[2].real() == doctest::Approx(27.0));

    const GridSpec s2 = GridSpec::make_uniform(2, 8, -4.0, 4.0);
    CHECK_THROWS_AS(harmonic_lattice_potential_1d(s2), ConfigError);
    const GridFunction vh2 = harmonic_potential(s2, 2.0);
    CHECK(vh2[0].real() == doctest::Approx(0.5 * (64.0 + 64.0)));
}

TEST_SUITE_END();
