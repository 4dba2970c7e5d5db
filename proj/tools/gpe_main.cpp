#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gpe/config.hpp"
#include "gpe/io.hpp"

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("GPE_LOG");
    if (!env) return LogLevel::Info;
    const std::string v = env;
    if (v == "quiet") return LogLevel::Quiet;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

bool logs(LogLevel at) { return log_level() >= at; }

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 12345;
};

std::string join(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

int cmd_solve(const Options& opt) {
    const gpe::RunConfig rc = gpe::load_run_config(opt.config_path);
    const gpe::GpeProblem problem = gpe::build_problem(rc.problem);
    const gpe::GridFunction phi0 = gpe::build_initial(rc, problem);

    if (logs(LogLevel::Info))
        std::cout << "solve: dim=" << rc.problem.dim << " n=" << rc.problem.n[0]
                  << " beta=" << rc.problem.beta << " tau=" << rc.solver.tau << "\n";

    const gpe::RunResult result = gpe::run(problem, rc.solver, phi0);

    std::filesystem::create_directories(opt.out_dir);
    if (rc.outputs.history_csv && rc.solver.record_history) {
        gpe::save_history_csv(join(opt.out_dir, "history.csv"), result.history);
        gpe::save_energy_plot_script(join(opt.out_dir, "energy.gp"), "history.csv");
    }
    if (rc.outputs.summary_json)
        gpe::save_json(join(opt.out_dir, "summary.json"), gpe::summary_to_json(result.summary));
    if (rc.outputs.state_binary) gpe::save_gpgf(join(opt.out_dir, "state.gpgf"), result.state.phi);
    if (rc.outputs.state_csv) gpe::save_state_csv(join(opt.out_dir, "state.csv"), result.state.phi);

    const gpe::RunSummary& s = result.summary;
    if (logs(LogLevel::Info)) {
        std::printf("solve: %s after %ld steps (%.2fs wall)\n",
                    s.converged ? "converged" : "NOT converged", s.steps, s.wall_seconds);
        std::printf("  E_h = %.12g  E_std = %.12g\n", s.energy_modified, s.energy_standard);
        std::printf("  lambda (chemical potential) = %.12g  gpe_residual = %.3e\n", s.lambda,
                    s.gpe_residual);
    }
    if (logs(LogLevel::Debug)) {
        std::printf("  final increment = %.3e (tol %.1e), stabilizer = %s\n", s.final_increment,
                    rc.solver.tol, rc.solver.stabilizer_auto ? "auto" : "fixed");
        if (!result.history.empty())
            std::printf("  last step: A = %.6g, lambda = %.6g, |<tilde-phi,phi>| = %.3e\n",
                        result.history.back().stabilizer, result.history.back().lambda,
                        result.history.back().ortho_defect);
    }
    return s.converged ? 0 : 2;
}

int cmd_study(const Options& opt) {
    const gpe::RunConfig rc = gpe::load_run_config(opt.config_path);
    if (!rc.study)
        throw gpe::ConfigError("config: the study command requires a [study] section");

    gpe::StudyPlan plan;
    plan.mode = rc.study->mode;
    plan.levels = rc.study->levels;
    plan.solver = rc.solver;
    plan.base_n = rc.problem.n;
    plan.threads = opt.threads;
    plan.make_problem = [&rc](const std::array<int, 3>& n) {
        return gpe::build_problem(rc.problem, n);
    };
    plan.make_initial = [&rc](const gpe::GpeProblem& p) { return gpe::build_initial(rc, p); };

    const gpe::StudyReport report = gpe::run_study(plan);

    std::filesystem::create_directories(opt.out_dir);
    gpe::save_json(join(opt.out_dir, "study.json"), gpe::study_to_json(report));
    gpe::save_study_csv(join(opt.out_dir, "study.csv"), report);
    gpe::save_study_plot_script(join(opt.out_dir, "study.gp"), "study.csv", report);

    const char* label = report.mode == gpe::StudyMode::Temporal ? "tau" : "h";
    for (std::size_t i = 0; i < report.level_values.size(); ++i) {
        std::printf("level %zu: %s = %-12.6g steps = %ld", i, label, report.level_values[i],
                    report.level_steps[i]);
        if (i < report.err_l2.size())
            std::printf("  err_l2 = %.6e  err_linf = %.6e", report.err_l2[i],
                        report.err_linf[i]);
        std::printf("\n");
    }
    if (report.degenerate_exact) {
        std::printf("study: degenerate-exact case (all levels identical to rounding)\n");
    } else {
        std::printf("study: mean order l2 = %.3f, linf = %.3f (window [%.1f, %.1f]) -> %s\n",
                    report.mean_order_l2, report.mean_order_linf, report.window_lo,
                    report.window_hi, report.pass ? "PASS" : "FAIL");
    }
    return report.pass ? 0 : 3;
}

int cmd_verify(const Options& opt) {
    const gpe::RunConfig rc = gpe::load_run_config(opt.config_path);
    const gpe::GpeProblem problem = gpe::build_problem(rc.problem);
    const gpe::GridFunction phi0 = gpe::build_initial(rc, problem);

    const gpe::SuiteReport report =
        gpe::invariant_suite(problem, rc.solver, phi0, rc.verify.steps, opt.seed);

    std::printf("%-34s %14s %12s  %s\n", "check", "worst defect", "threshold", "result");
    for (const gpe::CheckResult& c : report.checks) {
        std::printf("%-34s %14.3e %12.1e  %s\n", c.name.c_str(), c.worst, c.threshold,
                    c.informational ? "logged" : (c.pass ? "PASS" : "FAIL"));
    }
    std::printf("verify: %s\n", report.all_pass ? "all checks passed" : "FAILURES present");
    return report.all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground states of the Gross-Pitaevskii energy on periodic boxes\n"
                 "via a stabilized, explicit ETD normalized gradient flow"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", opt.config_path, "path to the run configuration file")
            ->required();
        sub->add_option("--out", opt.out_dir, "directory for emitted artifacts");
        sub->add_option("--threads", opt.threads, "parallelism cap (study levels)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "seed for randomized verification checks");
    };

    CLI::App* solve = app.add_subcommand("solve", "compute a ground state and emit artifacts");
    CLI::App* study = app.add_subcommand("study", "temporal/spatial refinement order study");
    CLI::App* verify = app.add_subcommand("verify", "run the invariant check suite");
    add_common(solve);
    add_common(study);
    add_common(verify);

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return cmd_solve(opt);
        if (study->parsed()) return cmd_study(opt);
        if (verify->parsed()) return cmd_verify(opt);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const gpe::StudyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gpe::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gpe::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
