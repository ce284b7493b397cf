#pragma once

#include <optional>
#include <string>

#include "otoc/config.hpp"
#include "otoc/ed.hpp"
#include "otoc/fit.hpp"
#include "otoc/otoc.hpp"

namespace otoc {

// Derived objects shared by the RBM run and the exact-oracle run.
struct RunContext {
    RunConfig cfg;
    TfimParams params;
    PauliOp v1, v2;
    std::vector<double> times;
    int n_visible = 0;
    int n_hidden = 0;
    int workers = 0;  // resolved
};

RunContext make_context(const RunConfig& cfg);

struct RunArtifacts {
    OtocCurve curve;
    std::optional<FitResult> fit;
    std::optional<OtocCurve> oracle_curve;
    std::vector<std::string> warnings;
};

// Executes the configured experiment and writes curve table + JSON, plot
// series, phase log, manifest and (optionally) oracle comparison and fit
// summary into out_dir.
RunArtifacts run_experiment(const RunConfig& cfg, const std::string& out_dir);

// Exact state-vector curve for the same configuration (initial state
// derived from the same seeds). Requires n_sites <= oracle_cap.
OtocCurve compute_oracle_curve(const RunConfig& cfg);

// Runs only the oracle and writes its curve into out_dir.
OtocCurve run_oracle(const RunConfig& cfg, const std::string& out_dir);

struct CompareRow {
    double t = 0.0;
    double d_re = 0.0;
    double d_im = 0.0;
    double ref_re = 0.0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double max_abs_d_re = 0.0;
    double max_abs_d_im = 0.0;
    double first_exceed_t = -1.0;  // earliest t with |d_re| > tolerance; -1 if never
    int n_compared = 0;
};

// Pointwise difference A - B. Grids must match unless interpolate is set,
// in which case B is linearly interpolated onto A's grid (within B's
// range). min_ref_re restricts the comparison to points where B's Re F is
// at least that value.
CompareReport compare_curves(const OtocCurve& a, const OtocCurve& b, bool interpolate,
                             double tolerance, double min_ref_re = -2.0);

std::string compare_report_text(const CompareReport& report, double tolerance);

}  // namespace otoc
