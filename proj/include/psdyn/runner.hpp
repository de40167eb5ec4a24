#pragma once

#include "psdyn/config.hpp"

namespace psdyn {

struct RunSummary {
    std::vector<std::string> produced;  // written files
    std::vector<std::string> errors;    // per-method failures (run continues)
};

// Executes the scenario: one field file per (method, time), one comparison
// report per method pair that includes the exact oracle, and a summary file.
// Deterministic for a given config.
RunSummary run(const ScenarioConfig& config);

struct SweepRow {
    double hbar = 0;
    double D = 0;  // sup of the wrapped on-manifold argument discrepancy, beam vs exact
};

struct SweepReport {
    double time = 0;
    std::vector<SweepRow> rows;
    std::vector<double> ratios;  // D(h_{k+1}) / D(h_k)
    bool pass = false;           // all ratios within [0.35, 0.65]
};

// Halving sweep of the on-manifold phase discrepancy between the narrow-beam
// field and the exact oracle. Needs >= 2 hbar values at ratio 2.
std::vector<SweepReport> sweep_hbar(const ScenarioConfig& config, const std::vector<double>& hbars);

void write_sweep_report(const std::vector<SweepReport>& reps, const std::string& path);

}  // namespace psdyn
