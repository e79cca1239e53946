#include "tradecurve/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "tradecurve/diversity.hpp"

namespace tradecurve {

const char* variable_token(Variable v) {
    switch (v) {
        case Variable::export_goods: return "export_goods";
        case Variable::import_goods: return "import_goods";
        case Variable::exporter_partners: return "exporters";
        case Variable::importer_partners: return "importers";
    }
    return "?";
}

std::optional<Variable> parse_variable(std::string_view token) {
    if (token == "export_goods") return Variable::export_goods;
    if (token == "import_goods") return Variable::import_goods;
    if (token == "exporters" || token == "exporter_partners")
        return Variable::exporter_partners;
    if (token == "importers" || token == "importer_partners")
        return Variable::importer_partners;
    return std::nullopt;
}

double variable_value(const CountryObservation& obs, Variable v) {
    switch (v) {
        case Variable::export_goods: return obs.export_goods;
        case Variable::import_goods: return obs.import_goods;
        case Variable::exporter_partners: return obs.exporter_partners;
        case Variable::importer_partners: return obs.importer_partners;
    }
    return 0.0;
}

YearlyResult fit_year(std::span<const TradeFlow> trades,
                      std::span<const GdpRecord> gdp, int year,
                      Variable variable, bool normalize_y,
                      const PanelOptions& panel_options,
                      const FitOptions& fit_options) {
    try {
        const auto panel = build_panel(trades, gdp, year, panel_options);

        std::vector<double> ys;
        ys.reserve(panel.size());
        for (const CountryObservation& obs : panel)
            ys.push_back(variable_value(obs, variable));
        const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());

        YearlyResult result;
        result.year = year;
        result.variable = variable;
        result.normalized = normalize_y;
        result.y_min = *lo;
        result.y_max = *hi;

        if (normalize_y) ys = normalize(ys);

        std::vector<XY> points;
        points.reserve(panel.size());
        for (std::size_t i = 0; i < panel.size(); ++i)
            points.push_back({panel[i].log_gdp, ys[i]});

        result.fit = fit_logistic(points, fit_options);
        result.cp = critical_points(result.fit.params);

        const StageCounts counts = stage_counts(panel, result.fit);
        const double n = static_cast<double>(counts.total());
        result.proportions = {counts.n_initial / n, counts.n_acceleration / n,
                              counts.n_final / n};
        return result;
    } catch (Error& e) {
        e.attach_year(year);
        throw;
    }
}

std::vector<YearlyResult> run_series(std::span<const TradeFlow> trades,
                                     std::span<const GdpRecord> gdp,
                                     int first_year, int last_year,
                                     Variable variable, bool normalize_y,
                                     const PanelOptions& panel_options,
                                     const FitOptions& fit_options,
                                     unsigned threads,
                                     std::vector<SeriesFailure>* failures) {
    if (first_year > last_year) std::swap(first_year, last_year);
    const std::size_t n_years = static_cast<std::size_t>(last_year - first_year) + 1;

    std::vector<std::optional<YearlyResult>> slots(n_years);
    std::vector<std::optional<SeriesFailure>> errors(n_years);
    std::exception_ptr fatal;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n_years; i = next.fetch_add(1)) {
            const int year = first_year + static_cast<int>(i);
            try {
                slots[i] = fit_year(trades, gdp, year, variable, normalize_y,
                                    panel_options, fit_options);
            } catch (const Error& e) {
                errors[i] = SeriesFailure{year, e.code(), e.message()};
            } catch (...) {
                fatal = std::current_exception();
                return;
            }
        }
    };

    const unsigned n_workers = std::max(
        1u, std::min(threads, static_cast<unsigned>(n_years)));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (fatal) std::rethrow_exception(fatal);

    std::vector<YearlyResult> out;
    for (std::size_t i = 0; i < n_years; ++i) {
        if (slots[i]) out.push_back(std::move(*slots[i]));
        else if (failures && errors[i]) failures->push_back(std::move(*errors[i]));
    }
    if (out.empty())
        throw AllYearsFailed("no year in " + std::to_string(first_year) + ":" +
                             std::to_string(last_year) + " produced a fit");
    return out;
}

const char* scaling_tag(double gamma) {
    if (gamma > 1.0) return "super-linear";
    if (gamma < 1.0) return "sub-linear";
    return "linear";
}

PowerLawFit fit_power_law(std::span<const XY> pairs) {
    std::vector<XY> logs;
    logs.reserve(pairs.size());
    int excluded = 0;
    for (const XY& p : pairs) {
        if (p.x > 0.0 && p.y > 0.0 && std::isfinite(p.x) && std::isfinite(p.y))
            logs.push_back({std::log(p.x), std::log(p.y)});
        else
            ++excluded;
    }
    if (logs.size() < 3)
        throw InsufficientData("power-law fit needs at least 3 strictly positive pairs; " +
                               std::to_string(logs.size()) + " remain after excluding " +
                               std::to_string(excluded));

    const double n = static_cast<double>(logs.size());
    double mx = 0.0, my = 0.0;
    for (const XY& p : logs) { mx += p.x; my += p.y; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const XY& p : logs) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
        syy += (p.y - my) * (p.y - my);
    }
    if (sxx == 0.0)
        throw InsufficientData("power-law fit needs at least two distinct X values");

    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (const XY& p : logs) {
        const double r = p.y - (intercept + slope * p.x);
        ss_res += r * r;
    }

    PowerLawFit fit;
    fit.c = std::exp(intercept);
    fit.gamma = slope;
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    fit.n_points = static_cast<int>(logs.size());
    fit.n_excluded = excluded;
    return fit;
}

std::array<PowerLawPair, 6> power_law_matrix(
    std::span<const CountryObservation> panel) {
    static constexpr std::array<std::pair<Variable, Variable>, 6> kPairs = {{
        {Variable::importer_partners, Variable::exporter_partners},
        {Variable::importer_partners, Variable::export_goods},
        {Variable::import_goods, Variable::exporter_partners},
        {Variable::import_goods, Variable::export_goods},
        {Variable::importer_partners, Variable::import_goods},
        {Variable::exporter_partners, Variable::export_goods},
    }};

    std::array<PowerLawPair, 6> out;
    for (std::size_t i = 0; i < kPairs.size(); ++i) {
        out[i].x = kPairs[i].first;
        out[i].y = kPairs[i].second;
        std::vector<XY> pts;
        pts.reserve(panel.size());
        for (const CountryObservation& obs : panel)
            pts.push_back({variable_value(obs, out[i].x),
                           variable_value(obs, out[i].y)});
        try {
            out[i].fit = fit_power_law(pts);
        } catch (const Error& e) {
            out[i].error = e.code();
        }
    }
    return out;
}

}  // namespace tradecurve
