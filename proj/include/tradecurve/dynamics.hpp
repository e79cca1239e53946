#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradecurve/ingest.hpp"
#include "tradecurve/sigmoid_fit.hpp"
#include "tradecurve/stages.hpp"

namespace tradecurve {

enum class Variable {
    export_goods,
    import_goods,
    exporter_partners,
    importer_partners,
};

// Canonical CLI/JSON token: export_goods, import_goods, exporters, importers.
const char* variable_token(Variable v);
std::optional<Variable> parse_variable(std::string_view token);
double variable_value(const CountryObservation& obs, Variable v);

struct YearlyResult {
    int year = 0;
    Variable variable = Variable::export_goods;
    LogisticFit fit;
    CriticalPoints cp;
    std::array<double, 3> proportions{};  // initial, acceleration, final
    bool normalized = false;
    double y_min = 0.0;  // min/max of the raw counts fed to the fit, so raw
    double y_max = 0.0;  // parameters stay recoverable after normalization
};

// Full single-year pipeline: panel -> optional min-max normalization ->
// logistic fit -> critical points -> stage proportions. Errors are re-thrown
// with the year attached.
YearlyResult fit_year(std::span<const TradeFlow> trades,
                      std::span<const GdpRecord> gdp, int year,
                      Variable variable, bool normalize_y,
                      const PanelOptions& panel_options = {},
                      const FitOptions& fit_options = {});

struct SeriesFailure {
    int year = 0;
    std::string code;
    std::string message;
};

// One YearlyResult per year that fits; failing years are recorded in
// `failures` and skipped. Output is ordered by year. Years are independent
// work units; `threads` > 1 evaluates them concurrently with output identical
// to the sequential run. Throws AllYearsFailed when nothing survives.
std::vector<YearlyResult> run_series(std::span<const TradeFlow> trades,
                                     std::span<const GdpRecord> gdp,
                                     int first_year, int last_year,
                                     Variable variable, bool normalize_y,
                                     const PanelOptions& panel_options = {},
                                     const FitOptions& fit_options = {},
                                     unsigned threads = 1,
                                     std::vector<SeriesFailure>* failures = nullptr);

struct PowerLawFit {
    double c = 0.0;      // prefactor, exp(intercept) of the log-log OLS
    double gamma = 0.0;  // exponent, slope of the log-log OLS
    double r_squared = 0.0;
    int n_points = 0;    // pairs actually fitted
    int n_excluded = 0;  // pairs dropped for a zero/negative coordinate
};

// "super-linear" / "sub-linear" / "linear"
const char* scaling_tag(double gamma);

// OLS on (log X, log Y). Pairs with a non-positive coordinate are excluded
// first; throws InsufficientData when fewer than 3 usable pairs remain (or
// all X coincide).
PowerLawFit fit_power_law(std::span<const XY> pairs);

struct PowerLawPair {
    Variable x = Variable::export_goods;
    Variable y = Variable::export_goods;
    std::optional<PowerLawFit> fit;
    std::string error;  // error code when fit is empty
};

// The six diversity-variable pairs, in fixed order:
//   importers->exporters, importers->export_goods, import_goods->exporters,
//   import_goods->export_goods, importers->import_goods,
//   exporters->export_goods.
// A pair that cannot be fitted reports its error; the others still succeed.
std::array<PowerLawPair, 6> power_law_matrix(
    std::span<const CountryObservation> panel);

}  // namespace tradecurve
