#include "tradecurve/sigmoid_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "tradecurve/stages.hpp"

namespace tradecurve {

namespace {

// 1 / (1 + exp(-t)) without overflow for extreme t.
double unit_logistic(double t) noexcept {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// theta = (log asym, log rate, xmid); the exp keeps asym, rate positive.
std::array<double, 3> to_theta(const LogisticParams& p) {
    return {std::log(p.asym), std::log(p.rate), p.xmid};
}

LogisticParams from_theta(const std::array<double, 3>& t) {
    return {std::exp(t[0]), std::exp(t[1]), t[2]};
}

double sum_squared_residuals(const LogisticParams& p, std::span<const XY> pts) {
    double ssr = 0.0;
    for (const XY& pt : pts) {
        const double r = pt.y - logistic_eval(p, pt.x);
        ssr += r * r;
    }
    return ssr;
}

// Gaussian elimination with partial pivoting on a 3x3 system.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b,
            std::array<double, 3>& x) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
        if (std::fabs(m[pivot][col]) < 1e-300) return false;
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < 3; ++row) {
            const double factor = m[row][col] / m[col][col];
            for (int k = col; k < 3; ++k) m[row][k] -= factor * m[col][k];
            b[row] -= factor * b[col];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double acc = b[row];
        for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * x[k];
        x[row] = acc / m[row][row];
        if (!std::isfinite(x[row])) return false;
    }
    return true;
}

// Heuristic start: asym0 = 1.05 * max y; xmid0 = x of the point whose y is
// nearest asym0/2 (ties toward smaller x); rate0 = 4*m/asym0 with m the
// steepest secant slope between x-adjacent points (the logistic's maximum
// slope is asym*rate/4).
LogisticParams heuristic_init(std::span<const XY> pts) {
    double y_max = -std::numeric_limits<double>::infinity();
    for (const XY& p : pts) y_max = std::max(y_max, p.y);
    const double asym0 = y_max > 0.0 ? 1.05 * y_max : 1.0;

    const double half = asym0 / 2.0;
    double best_dist = std::numeric_limits<double>::infinity();
    double xmid0 = pts[0].x;
    for (const XY& p : pts) {
        const double dist = std::fabs(p.y - half);
        if (dist < best_dist || (dist == best_dist && p.x < xmid0)) {
            best_dist = dist;
            xmid0 = p.x;
        }
    }

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });
    double steepest = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const XY& a = pts[order[i]];
        const XY& b = pts[order[i + 1]];
        const double dx = b.x - a.x;
        if (dx <= 0.0) continue;
        steepest = std::max(steepest, (b.y - a.y) / dx);
    }
    double rate0 = 4.0 * steepest / asym0;
    if (!(rate0 > 0.0) || !std::isfinite(rate0)) {
        const double x_range = pts[order.back()].x - pts[order.front()].x;
        rate0 = x_range > 0.0 ? 4.0 / x_range : 1.0;
    }
    return {asym0, rate0, xmid0};
}

}  // namespace

double logistic_eval(const LogisticParams& params, double x) noexcept {
    return params.asym * unit_logistic(params.rate * (x - params.xmid));
}

LogisticGradient logistic_gradient(const LogisticParams& params, double x) noexcept {
    const double s = unit_logistic(params.rate * (x - params.xmid));
    const double ds = s * (1.0 - s);
    return {s, params.asym * (x - params.xmid) * ds, -params.asym * params.rate * ds};
}

LogisticFit fit_logistic(std::span<const XY> points, const FitOptions& options) {
    if (points.size() < 4)
        throw DegenerateInput("logistic fit needs at least 4 points, got " +
                              std::to_string(points.size()));
    {
        const double x0 = points[0].x;
        bool distinct_x = false;
        for (const XY& p : points)
            if (p.x != x0) { distinct_x = true; break; }
        if (!distinct_x)
            throw DegenerateInput("logistic fit needs at least two distinct x values");
    }
    double y_mean = 0.0;
    for (const XY& p : points) y_mean += p.y;
    y_mean /= static_cast<double>(points.size());
    double ss_tot = 0.0;
    for (const XY& p : points) ss_tot += (p.y - y_mean) * (p.y - y_mean);
    if (ss_tot == 0.0)
        throw FlatData("all y values are equal; nothing to fit");

    LogisticParams p0 = options.init ? *options.init : heuristic_init(points);
    if (options.init && (!(p0.asym > 0.0) || !(p0.rate > 0.0) || !std::isfinite(p0.xmid)))
        throw InvalidParams("manual init requires asym > 0, rate > 0, finite xmid");

    std::array<double, 3> theta = to_theta(p0);
    double ssr = sum_squared_residuals(p0, points);
    std::vector<double> trace{ssr};
    double lambda = 1e-3;
    bool converged = ssr == 0.0;
    int iterations = 0;

    const std::size_t n = points.size();
    for (; iterations < options.max_iter && !converged; ) {
        ++iterations;
        const LogisticParams p = from_theta(theta);

        // Normal equations in theta space; chain rule folds the log
        // re-parameterization into the first two columns.
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < n; ++i) {
            const LogisticGradient g = logistic_gradient(p, points[i].x);
            const std::array<double, 3> row = {p.asym * g.d_asym,
                                               p.rate * g.d_rate, g.d_xmid};
            const double r = points[i].y - logistic_eval(p, points[i].x);
            for (int a = 0; a < 3; ++a) {
                jtr[a] += row[a] * r;
                for (int b = a; b < 3; ++b) jtj[a][b] += row[a] * row[b];
            }
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

        auto damped = jtj;
        for (int a = 0; a < 3; ++a) damped[a][a] += lambda * jtj[a][a];

        std::array<double, 3> step{};
        bool ok = solve3(damped, jtr, step);
        std::array<double, 3> theta_new{};
        double ssr_new = std::numeric_limits<double>::infinity();
        if (ok) {
            // clamping log(asym), log(rate) keeps exp() finite on wild steps
            theta_new[0] = std::clamp(theta[0] + step[0], -300.0, 300.0);
            theta_new[1] = std::clamp(theta[1] + step[1], -300.0, 300.0);
            theta_new[2] = theta[2] + step[2];
            ssr_new = sum_squared_residuals(from_theta(theta_new), points);
        }

        if (ok && ssr_new < ssr && std::isfinite(ssr_new)) {
            const double rel_change = (ssr - ssr_new) / ssr;
            theta = theta_new;
            ssr = ssr_new;
            trace.push_back(ssr);
            lambda = std::max(lambda / 10.0, 1e-15);
            if (ssr == 0.0 || rel_change < options.tol) converged = true;
        } else {
            lambda *= 10.0;
            // No direction improves anymore: the parameters are at the
            // attainable optimum, which the relative-change rule cannot see
            // when every step is rejected.
            if (lambda > 1e14) converged = true;
        }
    }

    const LogisticParams params = from_theta(theta);
    LogisticFit fit;
    fit.params = params;
    fit.n_points = static_cast<int>(n);
    fit.iterations = iterations;
    fit.converged = converged;
    fit.ssr_trace = std::move(trace);
    fit.residuals.reserve(n);
    for (const XY& p : points) fit.residuals.push_back(p.y - logistic_eval(params, p.x));
    fit.r_squared = 1.0 - ssr / ss_tot;
    const double dof = static_cast<double>(n) - 3.0;
    if (ssr > 0.0 && dof > 0.0)
        fit.f_value = ((ss_tot - ssr) / 2.0) / (ssr / dof);
    else
        fit.f_value = std::numeric_limits<double>::infinity();

    if (!converged)
        throw NotConverged("logistic fit hit the iteration cap (" +
                               std::to_string(options.max_iter) + ")",
                           std::move(fit));
    return fit;
}

FitDiagnostics fit_diagnostics(const LogisticFit& fit, std::span<const XY> points) {
    if (!(fit.params.rate > 0.0) || !(fit.params.asym > 0.0))
        throw StageUndefined("critical points are undefined for asym <= 0 or rate <= 0");
    if (fit.residuals.size() != points.size())
        throw DegenerateInput("diagnostics need the points the fit was produced from");

    const CriticalPoints cp = critical_points(fit.params);
    double sums[3] = {0.0, 0.0, 0.0};
    int counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int s = static_cast<int>(classify(points[i].x, cp));
        sums[s] += std::fabs(fit.residuals[i]);
        ++counts[s];
    }
    auto mean = [&](StageLabel label) -> std::optional<double> {
        const int s = static_cast<int>(label);
        if (counts[s] == 0) return std::nullopt;
        return sums[s] / counts[s];
    };
    FitDiagnostics d;
    d.r_squared = fit.r_squared;
    d.f_value = fit.f_value;
    d.stage_mean_abs_residual = {mean(StageLabel::Initial),
                                 mean(StageLabel::Acceleration),
                                 mean(StageLabel::Final)};
    return d;
}

}  // namespace tradecurve
