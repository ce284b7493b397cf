#pragma once

#include <string>
#include <vector>

#include "otoc/otoc.hpp"

namespace otoc {

// Curve table: '#'-prefixed key/value metadata header followed by
// tab-separated columns t, re_f, im_f, err, phase_correction. Values are
// printed with 17 significant digits so identical runs produce identical
// bytes.
void write_curve(const std::string& path, const OtocCurve& curve);
OtocCurve read_curve(const std::string& path);

// Same content as JSON for programmatic use.
void write_curve_json(const std::string& path, const OtocCurve& curve);

// One row per evolution step: context, step, t, re_E, im_E, delta_phi,
// accumulated_phi, warning flag.
void write_phase_log(const std::string& path, const PhaseLogBook& book);

// Two-column series (t, value) consumable by standard plotting tools.
enum class PlotSeries { re, im, err };
void write_plot_series(const std::string& path, const OtocCurve& curve, PlotSeries series);

std::string format_double(double value);  // shortest round-trip-exact form

}  // namespace otoc
