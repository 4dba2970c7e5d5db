#pragma once

#include <optional>
#include <string>

#include "gpe/model.hpp"
#include "gpe/solver.hpp"
#include "gpe/verify.hpp"

namespace gpe {

enum class PotentialKind { Harmonic, HarmonicLattice1d, CustomFile };
enum class InitialKind { Gaussian, ExpNegV, File };

struct ProblemConfig {
    int dim = 1;
    std::array<int, 3> n{};
    std::array<double, 3> lo{}, hi{};
    double beta = 0.0;
    PotentialKind potential = PotentialKind::Harmonic;
    double omega = 1.0;              // harmonic
    double lattice_amplitude = 25.0; // harmonic_lattice_1d
    double lattice_period = 4.0;
    std::string potential_file;      // custom_file
};

struct OutputConfig {
    bool history_csv = true;
    bool summary_json = true;
    bool state_binary = true;
    bool state_csv = false;
};

struct StudyConfig {
    StudyMode mode = StudyMode::Temporal;
    int levels = 4;
};

struct VerifyConfig {
    int steps = 200;
};

/// Everything a CLI invocation needs, parsed from one key/value config file
/// with [section] headers. Unknown sections or keys are rejected by name;
/// numeric fields are validated against the module preconditions up front.
struct RunConfig {
    ProblemConfig problem;
    SolverConfig solver;
    InitialKind initial = InitialKind::Gaussian;
    std::string initial_file;
    OutputConfig outputs;
    std::optional<StudyConfig> study;
    VerifyConfig verify;
};

RunConfig load_run_config(const std::string& path);

/// Samples the configured potential on the configured grid.
GpeProblem build_problem(const ProblemConfig& pc);

/// Same problem on a grid with different points per axis (spatial studies).
GpeProblem build_problem(const ProblemConfig& pc, const std::array<int, 3>& n_override);

GridFunction build_initial(const RunConfig& rc, const GpeProblem& p);

}  // namespace gpe
