#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gpe/grid.hpp"
#include "gpe/solver.hpp"
#include "gpe/verify.hpp"

namespace gpe {

/// Binary container for grid functions.
///
/// Layout (all little-endian): magic "GPGF", u32 version = 1, u32 dim,
/// dim x u32 points-per-axis, dim x f64 lo, dim x f64 hi, then prod(n)
/// (f64 re, f64 im) pairs in row-major order, axis order (x,y,z).
void save_gpgf(const std::string& path, const GridFunction& f);
GridFunction load_gpgf(const std::string& path);

/// One line per grid point: x[,y[,z]],re,im with a header row.
void save_state_csv(const std::string& path, const GridFunction& f);

/// Columns: step,E_h,E_std,lambda,A,norm_drift,ortho_defect,increment.
void save_history_csv(const std::string& path, const std::vector<StepDiagnostics>& history);

/// Gnuplot script plotting the energy column of a history CSV.
void save_energy_plot_script(const std::string& path, const std::string& history_csv);

/// Stable-field JSON view of a run summary. Wall time is deliberately left
/// out so identical runs emit byte-identical files; it is reported on stdout.
nlohmann::json summary_to_json(const RunSummary& summary);

nlohmann::json study_to_json(const StudyReport& report);

/// Writes a json value with 2-space indentation and a trailing newline.
void save_json(const std::string& path, const nlohmann::json& j);

/// Plot-ready long form: level,value,err_l2,err_linf,order_l2,order_linf
/// (order cells empty where undefined).
void save_study_csv(const std::string& path, const StudyReport& report);

/// Gnuplot script for the study CSV (log-log error vs tau or h).
void save_study_plot_script(const std::string& path, const std::string& study_csv,
                            const StudyReport& report);

}  // namespace gpe
