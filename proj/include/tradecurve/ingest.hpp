#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tradecurve/errors.hpp"

namespace tradecurve {

// One bilateral trade record. Values are stored as given in the source file
// (thousands of current USD in the NBER-UN extract); diversity counting only
// cares whether they are strictly positive.
struct TradeFlow {
    int year = 0;
    std::string exporter;
    std::string importer;
    std::string category;  // goods classification code, e.g. 4-digit SITC
    double value = 0.0;
    std::optional<double> quantity;
};

struct GdpRecord {
    int year = 0;
    std::string country;
    double gdp = 0.0;  // current USD, strictly positive
};

// Joined per-country-per-year point. Counts are integral in any panel built
// from real flows; they are doubles so normalized series and synthetic
// panels flow through the same fitting code.
struct CountryObservation {
    std::string country;
    int year = 0;
    double log_gdp = 0.0;
    double export_goods = 0.0;
    double import_goods = 0.0;
    double exporter_partners = 0.0;
    double importer_partners = 0.0;
};

// Expected header of a trade file plus the accepted year window.
struct TradeFileFormat {
    std::vector<std::string> columns = {"year", "exporter", "importer",
                                        "sitc",  "value",   "quantity"};
    int year_min = 1800;
    int year_max = 2200;
};

// Row-level outcome of a parse. Malformed rows are counted and sampled, never
// silently dropped.
struct ParseReport {
    std::size_t rows_total = 0;  // data rows seen (header excluded)
    std::size_t rows_bad = 0;
    std::size_t self_flows = 0;  // exporter == importer rejects (subset of rows_bad)
    std::vector<std::string> bad_samples;

    static constexpr std::size_t kMaxSamples = 20;

    void add_bad(std::size_t line_no, std::string_view reason) {
        ++rows_bad;
        if (bad_samples.size() < kMaxSamples) {
            bad_samples.push_back("line " + std::to_string(line_no) + ": " +
                                  std::string(reason));
        }
    }
};

template <typename Record>
struct Parsed {
    std::vector<Record> records;
    ParseReport report;
};

// Optional two-column mapping from trade-data country codes to GDP-table
// codes. Codes absent from the table pass through unchanged.
struct Crosswalk {
    std::unordered_map<std::string, std::string> mapping;

    const std::string& apply(const std::string& code) const {
        auto it = mapping.find(code);
        return it == mapping.end() ? code : it->second;
    }
};

struct CrosswalkParse {
    Crosswalk crosswalk;
    ParseReport report;
};

enum class LogBase { ten, natural };

struct PanelOptions {
    LogBase log_base = LogBase::ten;
    const Crosswalk* crosswalk = nullptr;  // not owned
};

// Countries dropped by the join, by side.
struct PanelJoinInfo {
    std::vector<std::string> trade_only;  // had flows, no GDP record
    std::vector<std::string> gdp_only;    // had GDP, no flows
};

Parsed<TradeFlow> parse_trade_flows(std::istream& in,
                                    const TradeFileFormat& format = {});
Parsed<GdpRecord> parse_gdp_table(std::istream& in);
CrosswalkParse parse_crosswalk(std::istream& in);

// Convenience wrappers that open a file and parse it, throwing
// UnreadableSource when the path cannot be read.
Parsed<TradeFlow> load_trade_file(const std::filesystem::path& path,
                                  const TradeFileFormat& format = {});
Parsed<GdpRecord> load_gdp_file(const std::filesystem::path& path);
CrosswalkParse load_crosswalk_file(const std::filesystem::path& path);

// One observation per country with BOTH at least one trade flow and a GDP
// record in `year`; everything else is excluded. Output is sorted by country
// code, so the join is invariant under permutation of either input.
std::vector<CountryObservation> build_panel(std::span<const TradeFlow> trades,
                                            std::span<const GdpRecord> gdp,
                                            int year,
                                            const PanelOptions& options = {},
                                            PanelJoinInfo* join = nullptr);

}  // namespace tradecurve
