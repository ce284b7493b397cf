#include "otoc/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace otoc {

namespace {

constexpr double kLambdaMin = 1e-8;
constexpr double kVfMin = 1e-8;
constexpr double kPMin = 0.0, kPMax = 1.5;
constexpr double kObjectiveTol = 1e-10;

using Params = Eigen::Vector3d;  // (lambda, v_f, p)

Params clamp(Params q) {
    q[0] = std::max(q[0], kLambdaMin);
    q[1] = std::max(q[1], kVfMin);
    q[2] = std::clamp(q[2], kPMin, kPMax);
    return q;
}

struct LmProblem {
    const std::vector<double>& t;
    const std::vector<double>& re_f;
    double d;

    Eigen::VectorXd residuals(const Params& q) const {
        Eigen::VectorXd r(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            r[static_cast<Eigen::Index>(i)] =
                wavefront_model(t[i], d, q[0], q[1], q[2]) - re_f[i];
        }
        return r;
    }

    double cost(const Params& q) const { return residuals(q).squaredNorm(); }

    Eigen::MatrixXd jacobian(const Params& q) const {
        Eigen::MatrixXd jac(t.size(), 3);
        for (int k = 0; k < 3; ++k) {
            const double step = 1e-6 * std::max(1.0, std::abs(q[k]));
            Params hi = clamp(q + step * Params::Unit(k));
            Params lo = clamp(q - step * Params::Unit(k));
            const double denom = hi[k] - lo[k];
            jac.col(k) = (residuals(hi) - residuals(lo)) / (denom != 0.0 ? denom : 1.0);
        }
        return jac;
    }
};

// Bounded Levenberg-Marquardt from one starting point.
std::pair<Params, double> lm_minimize(const LmProblem& prob, Params q) {
    q = clamp(q);
    double cost = prob.cost(q);
    double mu = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::MatrixXd jac = prob.jacobian(q);
        Eigen::VectorXd r = prob.residuals(q);
        Eigen::Matrix3d jtj = jac.transpose() * jac;
        Eigen::Vector3d jtr = jac.transpose() * r;
        bool improved = false;
        for (int attempt = 0; attempt < 25; ++attempt) {
            Eigen::Matrix3d damped = jtj;
            damped.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
            Params trial = clamp(q - damped.ldlt().solve(jtr));
            const double trial_cost = prob.cost(trial);
            if (trial_cost < cost) {
                improved = true;
                const double gain = cost - trial_cost;
                q = trial;
                cost = trial_cost;
                mu = std::max(mu / 3.0, 1e-12);
                if (gain < kObjectiveTol * (1.0 + cost)) return {q, cost};
                break;
            }
            mu *= 10.0;
            if (mu > 1e14) return {q, cost};
        }
        if (!improved) return {q, cost};
    }
    return {q, cost};
}

}  // namespace

double wavefront_model(double t, double d, double lambda, double v_f, double p) {
    const double u = d - v_f * t;
    const double front = std::copysign(std::pow(std::abs(u), 1.0 + p), u);
    return 1.0 - 0.5 * std::exp(-lambda * front / std::pow(t, p));
}

FitResult fit_wavefront_points(const std::vector<double>& t, const std::vector<double>& re_f,
                               double d, double threshold) {
    if (t.size() != re_f.size()) throw std::invalid_argument("fit: mismatched input lengths");

    std::vector<double> tw, fw;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > 0.0 && re_f[i] > threshold) {
            tw.push_back(t[i]);
            fw.push_back(re_f[i]);
        }
    }
    if (tw.size() < 4) {
        throw std::runtime_error("fit: fewer than 4 points in the fit window");
    }

    LmProblem prob{tw, fw, d};
    double best_cost = std::numeric_limits<double>::infinity();
    Params best = Params::Zero();
    bool found = false;
    for (double lambda0 : {0.5, 2.0, 5.0}) {
        for (double vf0 : {1.0, 2.0, 4.0}) {
            for (double p0 : {0.0, 0.5, 1.0}) {
                auto [q, cost] = lm_minimize(prob, Params(lambda0, vf0, p0));
                if (std::isfinite(cost) && cost < best_cost) {
                    best_cost = cost;
                    best = q;
                    found = true;
                }
            }
        }
    }
    if (!found) throw std::runtime_error("fit: no start converged");

    FitResult res;
    res.lambda = best[0];
    res.v_f = best[1];
    res.p = best[2];
    res.residual_norm = std::sqrt(best_cost);
    res.n_points_used = static_cast<int>(tw.size());
    res.window_threshold = threshold;
    return res;
}

FitResult fit_wavefront(const OtocCurve& curve, double d, double threshold) {
    std::vector<double> t, re_f;
    t.reserve(curve.points.size());
    re_f.reserve(curve.points.size());
    for (const auto& pt : curve.points) {
        t.push_back(pt.t);
        re_f.push_back(pt.f.real());
    }
    return fit_wavefront_points(t, re_f, d, threshold);
}

}  // namespace otoc
