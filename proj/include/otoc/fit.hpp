#pragma once

#include <vector>

#include "otoc/otoc.hpp"

namespace otoc {

// Early-time wavefront model for the real part of the OTOC:
//   Re F(t) = 1 - 1/2 exp(-lambda (d - v_f t)^{1+p} / t^p)
// The power of (d - v_f t) is sign-extended (sign(u) |u|^{1+p}) so the
// objective stays defined when an iterate crosses the front.
double wavefront_model(double t, double d, double lambda, double v_f, double p);

struct FitResult {
    double lambda = 0.0;
    double v_f = 0.0;
    double p = 0.0;
    double residual_norm = 0.0;
    int n_points_used = 0;
    double window_threshold = 0.0;
};

// Least-squares fit of Re F over the window {t > 0, Re F > threshold},
// multi-started from a small grid of initial guesses (lambda in
// {0.5, 2, 5}, v_f in {1, 2, 4}, p in {0, 0.5, 1}); bounds lambda > 0,
// v_f > 0, p in [0, 1.5].
FitResult fit_wavefront(const OtocCurve& curve, double d, double threshold = 0.85);

FitResult fit_wavefront_points(const std::vector<double>& t, const std::vector<double>& re_f,
                               double d, double threshold = 0.85);

}  // namespace otoc
