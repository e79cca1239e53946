#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tradecurve/errors.hpp"

namespace tradecurve {

// y = asym / (1 + exp(-rate * (x - xmid)))
//   asym : upper asymptote, same units as y
//   rate : maximum relative growth rate, per unit x
//   xmid : x-coordinate of the inflection point
struct LogisticParams {
    double asym = 0.0;
    double rate = 0.0;
    double xmid = 0.0;
};

struct XY {
    double x = 0.0;
    double y = 0.0;
};

struct LogisticFit {
    LogisticParams params;
    double r_squared = 0.0;  // 1 - SS_res / SS_tot
    double f_value = 0.0;    // ((SS_tot-SS_res)/(p-1)) / (SS_res/(n-p)), p = 3
    std::vector<double> residuals;  // observed - fitted, one per point
    int n_points = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> ssr_trace;  // SSR at start plus after each accepted step
};

struct FitOptions {
    int max_iter = 200;
    double tol = 1e-10;  // relative SSR change at which iteration stops
    std::optional<LogisticParams> init;  // manual override of the heuristic
};

// Thrown when the iteration cap is hit; `best` holds the best parameters
// reached so far, with converged = false.
class NotConverged : public Error {
public:
    NotConverged(std::string message, LogisticFit best_so_far)
        : Error("NotConverged", std::move(message)), best(std::move(best_so_far)) {}
    LogisticFit best;
};

// Saturates to 0 or asym for extreme exponents instead of overflowing.
double logistic_eval(const LogisticParams& params, double x) noexcept;

// Partial derivatives of logistic_eval with respect to (asym, rate, xmid).
struct LogisticGradient {
    double d_asym = 0.0;  // s
    double d_rate = 0.0;  // asym * (x - xmid) * s * (1 - s)
    double d_xmid = 0.0;  // -asym * rate * s * (1 - s)
};
LogisticGradient logistic_gradient(const LogisticParams& params, double x) noexcept;

// Damped Gauss-Newton (Levenberg-Marquardt) least squares with analytic
// derivatives. asym and rate are optimized through a log re-parameterization
// so they stay positive. Requires >= 4 points, >= 2 distinct x, y not all
// equal. Throws DegenerateInput, FlatData, NotConverged.
LogisticFit fit_logistic(std::span<const XY> points, const FitOptions& options = {});

// Mean absolute residual per growth stage; a stage with no points is empty,
// not zero.
struct StageResidualMeans {
    std::optional<double> initial;
    std::optional<double> acceleration;
    std::optional<double> final_stage;
};

struct FitDiagnostics {
    double r_squared = 0.0;
    double f_value = 0.0;
    StageResidualMeans stage_mean_abs_residual;
};

// `points` must be the points the fit was produced from. Throws
// StageUndefined when the critical points are not computable.
FitDiagnostics fit_diagnostics(const LogisticFit& fit, std::span<const XY> points);

}  // namespace tradecurve
