#pragma once

#include <string>
#include <vector>

#include "warpflow/diagnostics.hpp"
#include "warpflow/flow.hpp"

namespace warpflow {

// Shortest decimal text that round-trips a double (17 significant digits
// when needed); '.' decimal point, no locale.
std::string format_g17(double v);

// Columns: t,area,volume,sup_grad,osc,holder_half,max_z; max_z left empty
// when barrier monitoring is off. LF line endings.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& rows);

// Header theta,t=<t1>,...; one row per grid node of the first snapshot.
void write_snapshots_csv(const std::string& path,
                         const std::vector<Snapshot>& snapshots);

void write_modulus_csv(const std::string& path,
                       const std::vector<double>& omega, double h);

// Whole-file reader used by tests and the profile-file initial condition.
std::vector<std::vector<double>> read_csv_columns(
    const std::string& path, std::vector<std::string>* header = nullptr);

}  // namespace warpflow
