#pragma once

// Scenario pipelines behind the CLI subcommands.  Each run_* composes the
// forward models (and, where the pipeline calls for it, the inverse
// extraction) and returns the full set of output files as name -> bytes, so
// runs are trivially byte-comparable and the CLI only has to write them out.

#include <string>
#include <utility>
#include <vector>

#include "tmsim/config.hpp"

namespace tmsim {

struct RunFiles {
    std::vector<std::pair<std::string, std::string>> files;  // name -> content

    const std::string& content(const std::string& name) const;
};

// sweep.csv + report.json: (theta, delta_g, delta_e, R) per site group {3,5}, {4,6}, {1}
RunFiles run_sweep(const Scenario& sc);

// spectrum.csv + features.json: all sites excited by the configured
// polarization; features with |offset| > window/2 are excluded
RunFiles run_spectrum(const Scenario& sc);

// nutation_a..d.csv + extraction.json: (a) zero field, (b) repump at
// nu0-delta_g -> D_sw, (c) repump at nu0+delta_g+delta_e -> D_w, (d) no
// repump; each trace fitted, then R and rho extracted from the densities
RunFiles run_nutation(const Scenario& sc);

// echo.csv + solution.json: strong-branch samples plus the weak point,
// solved for R by the weighted-intensity intersection
RunFiles run_echo(const Scenario& sc);

// decay.csv + fit.json: hole depth vs delay, exponential fit
RunFiles run_lifetime(const Scenario& sc);

// fit.json for an external two-column CSV; model is "nutation" or
// "exponential"
RunFiles run_fit(const Scenario& sc, const std::string& input_csv,
                 const std::string& model);

void write_outputs(const RunFiles& rf, const std::string& out_dir);

}  // namespace tmsim
