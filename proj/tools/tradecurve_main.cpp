// tradecurve: fits S-curves of trade diversity against log GDP, classifies
// countries into growth stages, and tracks parameter dynamics across years.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tradecurve/csv.hpp"
#include "tradecurve/diversity.hpp"
#include "tradecurve/dynamics.hpp"
#include "tradecurve/ingest.hpp"
#include "tradecurve/report.hpp"
#include "tradecurve/sigmoid_fit.hpp"
#include "tradecurve/stages.hpp"

namespace fs = std::filesystem;
using namespace tradecurve;

namespace {

struct RunConfig {
    std::string trades_path;
    std::string gdp_path;
    std::string crosswalk_path;
    std::string out_dir = ".";
    int year = 0;
    int year_first = 0;
    int year_last = 0;
    std::string variable = "export_goods";
    std::string log_base = "10";
    bool normalize = false;
    std::string country;  // profile filter
    std::string pair;     // powerlaw filter, "x:y"
    int max_iter = 200;
    double tol = 1e-10;
    std::vector<double> init;  // A,k,XM override
};

unsigned thread_cap() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TRADECURVE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
    }
    return hw;
}

struct LoadedInputs {
    Parsed<TradeFlow> trades;
    Parsed<GdpRecord> gdp;
    std::optional<Crosswalk> crosswalk;
    PanelOptions panel_options;
};

LoadedInputs load_inputs(const RunConfig& cfg, bool need_gdp = true) {
    LoadedInputs in;
    in.trades = load_trade_file(cfg.trades_path);
    if (need_gdp) in.gdp = load_gdp_file(cfg.gdp_path);
    if (!cfg.crosswalk_path.empty()) {
        in.crosswalk = load_crosswalk_file(cfg.crosswalk_path).crosswalk;
        in.panel_options.crosswalk = &*in.crosswalk;
    }
    in.panel_options.log_base = cfg.log_base == "e" ? LogBase::natural : LogBase::ten;
    return in;
}

FitOptions fit_options(const RunConfig& cfg) {
    FitOptions opt;
    opt.max_iter = cfg.max_iter;
    opt.tol = cfg.tol;
    if (!cfg.init.empty())
        opt.init = LogisticParams{cfg.init[0], cfg.init[1], cfg.init[2]};
    return opt;
}

Variable variable_or_throw(const std::string& token) {
    const auto v = parse_variable(token);
    if (!v)
        throw DegenerateInput("unknown variable '" + token +
                              "'; expected export_goods, import_goods, exporters or importers");
    return *v;
}

void write_parse_reports(const fs::path& out, const LoadedInputs& in,
                         const PanelJoinInfo* join) {
    atomic_write(out / "trade_parse_report.json",
                 parse_report_json(in.trades.report, join));
    if (in.gdp.report.rows_total > 0 || !in.gdp.records.empty())
        atomic_write(out / "gdp_parse_report.json",
                     parse_report_json(in.gdp.report));
}

// Re-derives the fitted points exactly as fit_year does, for plot data.
std::vector<XY> panel_points(std::span<const CountryObservation> panel,
                             Variable var, bool normalized) {
    std::vector<double> ys;
    ys.reserve(panel.size());
    for (const auto& obs : panel) ys.push_back(variable_value(obs, var));
    if (normalized) ys = normalize(ys);
    std::vector<XY> pts;
    pts.reserve(panel.size());
    for (std::size_t i = 0; i < panel.size(); ++i)
        pts.push_back({panel[i].log_gdp, ys[i]});
    return pts;
}

int cmd_fit(const RunConfig& cfg) {
    const auto in = load_inputs(cfg);
    const Variable var = variable_or_throw(cfg.variable);
    const YearlyResult result =
        fit_year(in.trades.records, in.gdp.records, cfg.year, var, cfg.normalize,
                 in.panel_options, fit_options(cfg));

    PanelJoinInfo join;
    const auto panel = build_panel(in.trades.records, in.gdp.records, cfg.year,
                                   in.panel_options, &join);
    const StageCounts counts = stage_counts(panel, result.fit);
    const auto points = panel_points(panel, var, cfg.normalize);

    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    atomic_write(out / "fit.json", fit_json(result, counts));
    atomic_write(out / "fit_points.tsv",
                 fit_points_tsv(panel, points, result.fit.params));
    write_parse_reports(out, in, &join);
    std::cout << "fit " << cfg.year << " " << variable_token(var)
              << ": A=" << result.fit.params.asym << " k=" << result.fit.params.rate
              << " XM=" << result.fit.params.xmid << " r2=" << result.fit.r_squared
              << "\n";
    return 0;
}

int cmd_stages(const RunConfig& cfg) {
    const auto in = load_inputs(cfg);
    const Variable var = variable_or_throw(cfg.variable);
    const YearlyResult result =
        fit_year(in.trades.records, in.gdp.records, cfg.year, var, cfg.normalize,
                 in.panel_options, fit_options(cfg));

    PanelJoinInfo join;
    const auto panel = build_panel(in.trades.records, in.gdp.records, cfg.year,
                                   in.panel_options, &join);
    const StageCounts counts = stage_counts(panel, result.fit);

    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    atomic_write(out / "stages.csv", stages_csv(panel, counts));
    atomic_write(out / "stage_counts.json", stage_counts_json(counts));
    write_parse_reports(out, in, &join);
    std::cout << "stages " << cfg.year << ": initial=" << counts.n_initial
              << " acceleration=" << counts.n_acceleration
              << " final=" << counts.n_final << "\n";
    return 0;
}

int cmd_series(const RunConfig& cfg) {
    const auto in = load_inputs(cfg);
    const Variable var = variable_or_throw(cfg.variable);

    std::vector<SeriesFailure> failures;
    const auto series =
        run_series(in.trades.records, in.gdp.records, cfg.year_first, cfg.year_last,
                   var, cfg.normalize, in.panel_options, fit_options(cfg),
                   thread_cap(), &failures);

    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    atomic_write(out / "series.json", series_json(series));
    atomic_write(out / "fig3.tsv", fig_params_tsv(series));
    atomic_write(out / "fig4.tsv", fig_critical_tsv(series));
    atomic_write(out / "fig5.tsv", fig_proportions_tsv(series));
    write_parse_reports(out, in, nullptr);

    std::cout << "series " << cfg.year_first << ":" << cfg.year_last << " "
              << variable_token(var) << ": " << series.size() << " years fitted";
    if (!failures.empty()) {
        std::cout << ", " << failures.size() << " skipped (";
        for (std::size_t i = 0; i < failures.size(); ++i) {
            if (i) std::cout << " ";
            std::cout << failures[i].year;
        }
        std::cout << ")";
    }
    std::cout << "\n";
    return 0;
}

int cmd_powerlaw(const RunConfig& cfg) {
    const auto in = load_inputs(cfg);
    const auto panel = build_panel(in.trades.records, in.gdp.records, cfg.year,
                                   in.panel_options);
    auto matrix = power_law_matrix(panel);

    std::vector<PowerLawPair> selected;
    if (cfg.pair.empty()) {
        selected.assign(matrix.begin(), matrix.end());
    } else {
        const auto colon = cfg.pair.find(':');
        if (colon == std::string::npos)
            throw DegenerateInput("--pair expects the form X:Y, e.g. importers:export_goods");
        const Variable px = variable_or_throw(cfg.pair.substr(0, colon));
        const Variable py = variable_or_throw(cfg.pair.substr(colon + 1));
        for (const PowerLawPair& p : matrix)
            if (p.x == px && p.y == py) selected.push_back(p);
        if (selected.empty())
            throw DegenerateInput("pair '" + cfg.pair + "' is not one of the six tracked pairs");
    }

    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    atomic_write(out / "powerlaw.json", powerlaw_json(cfg.year, selected));
    write_parse_reports(out, in, nullptr);
    std::cout << "powerlaw " << cfg.year << ": " << selected.size() << " pair(s)\n";
    return 0;
}

int cmd_profile(const RunConfig& cfg) {
    const auto in = load_inputs(cfg, /*need_gdp=*/false);

    JsonWriter w;
    w.begin_array();
    auto emit = [&](const DiversityProfile& p) {
        w.begin_object();
        w.key("country").value(p.country);
        w.key("year").value(p.year);
        w.key("export_goods").value(p.export_goods);
        w.key("import_goods").value(p.import_goods);
        w.key("exporter_partners").value(p.exporter_partners);
        w.key("importer_partners").value(p.importer_partners);
        w.key("shannon_export");
        if (p.shannon_export) w.value(*p.shannon_export);
        else w.null();
        w.end_object();
    };
    if (!cfg.country.empty()) {
        emit(profile(in.trades.records, cfg.country, cfg.year));
    } else {
        for (const auto& [code, p] : profile_all(in.trades.records, cfg.year,
                                                 in.panel_options.crosswalk))
            emit(p);
    }
    w.end_array();

    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    atomic_write(out / "profiles.json", w.str() + "\n");
    atomic_write(out / "trade_parse_report.json",
                 parse_report_json(in.trades.report));
    std::cout << "profile " << cfg.year << " written\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-curve analysis of trade diversity vs. log GDP"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string years_spec;

    auto add_common = [&](CLI::App* sub, bool need_gdp) {
        sub->add_option("--trades", cfg.trades_path, "trade flow CSV")
            ->required();
        if (need_gdp)
            sub->add_option("--gdp", cfg.gdp_path, "GDP table CSV")->required();
        sub->add_option("--crosswalk", cfg.crosswalk_path,
                        "country-code crosswalk CSV (from,to)");
        sub->add_option("--out", cfg.out_dir, "output directory")
            ->capture_default_str();
        sub->add_option("--log-base", cfg.log_base, "log base for GDP")
            ->check(CLI::IsMember({"10", "e"}))
            ->capture_default_str();
    };
    const auto variable_check = CLI::Validator(
        [](std::string& token) -> std::string {
            if (parse_variable(token)) return {};
            return "expected export_goods, import_goods, exporters or importers, got '" +
                   token + "'";
        },
        "VARIABLE");
    auto add_fitting = [&](CLI::App* sub) {
        sub->add_option("--variable", cfg.variable,
                        "export_goods | import_goods | exporters | importers")
            ->check(variable_check)
            ->capture_default_str();
        sub->add_option("--max-iter", cfg.max_iter, "iteration cap")
            ->capture_default_str();
        sub->add_option("--tol", cfg.tol, "relative SSR stopping tolerance")
            ->capture_default_str();
        sub->add_option("--init", cfg.init, "manual start A,k,XM")
            ->delimiter(',')
            ->expected(3);
    };

    CLI::App* fit = app.add_subcommand("fit", "fit one year, one variable");
    add_common(fit, true);
    add_fitting(fit);
    fit->add_option("--year", cfg.year, "calendar year")->required();
    fit->add_flag("--normalize,!--raw", cfg.normalize,
                  "min-max normalize the y variable (default: raw)");

    CLI::App* stages = app.add_subcommand("stages", "classify countries into stages");
    add_common(stages, true);
    add_fitting(stages);
    stages->add_option("--year", cfg.year, "calendar year")->required();
    stages->add_flag("--normalize,!--raw", cfg.normalize,
                     "min-max normalize the y variable (default: raw)");

    const auto years_check = CLI::Validator(
        [](std::string& spec) -> std::string {
            const auto colon = spec.find(':');
            if (colon != std::string::npos &&
                csv::parse_int(std::string_view(spec).substr(0, colon)) &&
                csv::parse_int(std::string_view(spec).substr(colon + 1)))
                return {};
            return "expected a year range A:B, got '" + spec + "'";
        },
        "YEARS");
    CLI::App* series = app.add_subcommand("series", "fit a range of years");
    add_common(series, true);
    add_fitting(series);
    series->add_option("--years", years_spec, "year range A:B")
        ->check(years_check)
        ->required();
    cfg.normalize = false;  // series flips the default below
    series->add_flag("--normalize,!--raw", cfg.normalize,
                     "min-max normalize the y variable (default: normalize)");

    const auto pair_check = CLI::Validator(
        [](std::string& spec) -> std::string {
            const auto colon = spec.find(':');
            if (colon != std::string::npos &&
                parse_variable(spec.substr(0, colon)) &&
                parse_variable(spec.substr(colon + 1)))
                return {};
            return "expected a variable pair X:Y, got '" + spec + "'";
        },
        "PAIR");
    CLI::App* powerlaw = app.add_subcommand("powerlaw", "six-pair power-law matrix");
    add_common(powerlaw, true);
    powerlaw->add_option("--year", cfg.year, "calendar year")->required();
    powerlaw->add_option("--pair", cfg.pair, "restrict to one pair, X:Y")
        ->check(pair_check);

    CLI::App* profile_cmd = app.add_subcommand("profile", "diversity profiles");
    add_common(profile_cmd, false);
    profile_cmd->add_option("--year", cfg.year, "calendar year")->required();
    profile_cmd->add_option("--country", cfg.country, "single country code");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (series->parsed()) {
            const auto colon = years_spec.find(':');
            cfg.year_first =
                *csv::parse_int(std::string_view(years_spec).substr(0, colon));
            cfg.year_last =
                *csv::parse_int(std::string_view(years_spec).substr(colon + 1));
            // series defaults to normalized unless --raw was given
            if (series->count("--normalize") == 0 && series->count("--raw") == 0)
                cfg.normalize = true;
            return cmd_series(cfg);
        }
        if (fit->parsed()) return cmd_fit(cfg);
        if (stages->parsed()) return cmd_stages(cfg);
        if (powerlaw->parsed()) return cmd_powerlaw(cfg);
        if (profile_cmd->parsed()) return cmd_profile(cfg);
    } catch (const Error& e) {
        std::cerr << error_json(e.code(), e.message());
        return 1;
    } catch (const std::exception& e) {
        std::cerr << error_json("Internal", e.what());
        return 1;
    }
    return 2;
}
