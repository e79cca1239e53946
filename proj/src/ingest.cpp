#include "tradecurve/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "tradecurve/csv.hpp"
#include "tradecurve/diversity.hpp"

namespace tradecurve {

namespace {

void require_header(std::istream& in, const std::vector<std::string>& columns,
                    const char* what) {
    std::string line;
    if (!csv::getline(in, line))
        throw SchemaMismatch(std::string(what) + ": input is empty, expected a header");
    if (line.rfind("\xef\xbb\xbf", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
    std::vector<std::string_view> fields;
    csv::split(line, fields);
    auto mismatch = [&](const std::string& detail) {
        throw SchemaMismatch(std::string(what) + ": header does not match, " + detail);
    };
    if (fields.size() != columns.size())
        mismatch("expected " + std::to_string(columns.size()) + " columns, got " +
                 std::to_string(fields.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (csv::lower(fields[i]) != csv::lower(columns[i]))
            mismatch("column " + std::to_string(i + 1) + " is '" +
                     std::string(fields[i]) + "', expected '" + columns[i] + "'");
    }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UnreadableSource("cannot open " + path.string());
    return in;
}

}  // namespace

Parsed<TradeFlow> parse_trade_flows(std::istream& in, const TradeFileFormat& format) {
    if (!in) throw UnreadableSource("trade source stream is not readable");
    require_header(in, format.columns, "trade file");

    Parsed<TradeFlow> out;
    std::string line;
    std::vector<std::string_view> f;
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++out.report.rows_total;
        csv::split(line, f);
        if (f.size() != format.columns.size()) {
            out.report.add_bad(line_no, "expected " +
                               std::to_string(format.columns.size()) +
                               " fields, got " + std::to_string(f.size()));
            continue;
        }
        const auto year = csv::parse_int(f[0]);
        if (!year) {
            out.report.add_bad(line_no, "year is not an integer: '" + std::string(f[0]) + "'");
            continue;
        }
        if (*year < format.year_min || *year > format.year_max) {
            out.report.add_bad(line_no, "year " + std::to_string(*year) + " outside [" +
                               std::to_string(format.year_min) + ", " +
                               std::to_string(format.year_max) + "]");
            continue;
        }
        if (f[1].empty() || f[2].empty() || f[3].empty()) {
            out.report.add_bad(line_no, "empty exporter, importer or category code");
            continue;
        }
        if (f[1] == f[2]) {
            // Intra-country rows are rejected and their count noted.
            ++out.report.self_flows;
            out.report.add_bad(line_no, "exporter equals importer: '" + std::string(f[1]) + "'");
            continue;
        }
        const auto value = csv::parse_double(f[4]);
        if (!value || !std::isfinite(*value) || *value < 0.0) {
            out.report.add_bad(line_no, "value must be a non-negative number: '" +
                               std::string(f[4]) + "'");
            continue;
        }
        std::optional<double> quantity;
        if (!f[5].empty()) {
            quantity = csv::parse_double(f[5]);
            if (!quantity || !std::isfinite(*quantity) || *quantity < 0.0) {
                out.report.add_bad(line_no, "quantity must be a non-negative number: '" +
                                   std::string(f[5]) + "'");
                continue;
            }
        }
        out.records.push_back(TradeFlow{*year, std::string(f[1]), std::string(f[2]),
                                        std::string(f[3]), *value, quantity});
    }
    return out;
}

Parsed<GdpRecord> parse_gdp_table(std::istream& in) {
    if (!in) throw UnreadableSource("gdp source stream is not readable");
    static const std::vector<std::string> columns = {"year", "country", "gdp"};
    require_header(in, columns, "gdp file");

    Parsed<GdpRecord> out;
    std::set<std::pair<int, std::string>> seen;
    std::string line;
    std::vector<std::string_view> f;
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++out.report.rows_total;
        csv::split(line, f);
        if (f.size() != columns.size()) {
            out.report.add_bad(line_no, "expected 3 fields, got " + std::to_string(f.size()));
            continue;
        }
        const auto year = csv::parse_int(f[0]);
        if (!year) {
            out.report.add_bad(line_no, "year is not an integer: '" + std::string(f[0]) + "'");
            continue;
        }
        if (f[1].empty()) {
            out.report.add_bad(line_no, "empty country code");
            continue;
        }
        const auto gdp = csv::parse_double(f[2]);
        if (!gdp || !std::isfinite(*gdp) || *gdp <= 0.0) {
            out.report.add_bad(line_no, "gdp must be positive: '" + std::string(f[2]) + "'");
            continue;
        }
        if (!seen.emplace(*year, std::string(f[1])).second)
            throw DuplicateKey("duplicate (year, country) in gdp table: (" +
                               std::to_string(*year) + ", " + std::string(f[1]) + ")");
        out.records.push_back(GdpRecord{*year, std::string(f[1]), *gdp});
    }
    return out;
}

CrosswalkParse parse_crosswalk(std::istream& in) {
    if (!in) throw UnreadableSource("crosswalk source stream is not readable");
    static const std::vector<std::string> columns = {"from", "to"};
    require_header(in, columns, "crosswalk file");

    CrosswalkParse out;
    std::string line;
    std::vector<std::string_view> f;
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++out.report.rows_total;
        csv::split(line, f);
        if (f.size() != 2 || f[0].empty() || f[1].empty()) {
            out.report.add_bad(line_no, "expected two non-empty fields");
            continue;
        }
        auto [it, inserted] = out.crosswalk.mapping.emplace(std::string(f[0]),
                                                            std::string(f[1]));
        if (!inserted)
            throw DuplicateKey("duplicate 'from' code in crosswalk: " + std::string(f[0]));
    }
    return out;
}

Parsed<TradeFlow> load_trade_file(const std::filesystem::path& path,
                                  const TradeFileFormat& format) {
    auto in = open_or_throw(path);
    return parse_trade_flows(in, format);
}

Parsed<GdpRecord> load_gdp_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_gdp_table(in);
}

CrosswalkParse load_crosswalk_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_crosswalk(in);
}

std::vector<CountryObservation> build_panel(std::span<const TradeFlow> trades,
                                            std::span<const GdpRecord> gdp,
                                            int year, const PanelOptions& options,
                                            PanelJoinInfo* join) {
    // Diversity counts for every country seen in the year's flows, keyed by
    // crosswalk-mapped code so codes naming the same country pool together.
    auto profiles = profile_all(trades, year, options.crosswalk);

    std::map<std::string, double> gdp_by_country;
    for (const GdpRecord& g : gdp)
        if (g.year == year) gdp_by_country.emplace(g.country, g.gdp);

    if (join) {
        join->trade_only.clear();
        join->gdp_only.clear();
    }

    std::vector<CountryObservation> panel;
    for (const auto& [code, prof] : profiles) {
        auto it = gdp_by_country.find(code);
        if (it == gdp_by_country.end()) {
            if (join) join->trade_only.push_back(code);
            continue;  // no GDP record: the country is ignored
        }
        CountryObservation obs;
        obs.country = code;
        obs.year = year;
        obs.log_gdp = options.log_base == LogBase::ten ? std::log10(it->second)
                                                       : std::log(it->second);
        obs.export_goods = prof.export_goods;
        obs.import_goods = prof.import_goods;
        obs.exporter_partners = prof.exporter_partners;
        obs.importer_partners = prof.importer_partners;
        panel.push_back(std::move(obs));
    }

    if (join) {
        std::set<std::string> matched;
        for (const auto& obs : panel) matched.insert(obs.country);
        for (const auto& [code, g] : gdp_by_country)
            if (!matched.count(code)) join->gdp_only.push_back(code);
    }

    if (panel.empty())
        throw EmptyPanel("no country has both trade flows and a GDP record in " +
                         std::to_string(year));
    std::sort(panel.begin(), panel.end(),
              [](const CountryObservation& a, const CountryObservation& b) {
                  return a.country < b.country;
              });
    return panel;
}

}  // namespace tradecurve
