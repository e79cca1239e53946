#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tradecurve/ingest.hpp"

namespace tradecurve {

// Distinct-set diversity counts for one country in one year. Only flows with
// strictly positive value count; a zero-value line is a reporting artifact,
// not trade.
struct DiversityProfile {
    std::string country;
    int year = 0;
    int export_goods = 0;       // distinct exported categories
    int import_goods = 0;       // distinct imported categories
    int exporter_partners = 0;  // distinct destination countries
    int importer_partners = 0;  // distinct source countries
    std::optional<double> shannon_export;  // nats; empty when no export value
};

// A country with no flows in the year yields an all-zero profile.
DiversityProfile profile(std::span<const TradeFlow> trades,
                         const std::string& country, int year);

// Single-pass bulk version of profile(); keyed and ordered by country code.
// When a crosswalk is given, country codes are mapped before counting, so
// codes that map to the same country pool their distinct sets.
std::map<std::string, DiversityProfile> profile_all(
    std::span<const TradeFlow> trades, int year,
    const Crosswalk* crosswalk = nullptr);

// H = -sum_c p_c ln p_c over the country's export value shares by category.
// Throws NoExports when the country has no positive export value in the year.
double shannon_entropy(std::span<const TradeFlow> trades,
                       const std::string& country, int year);

// Min-max rescaling to [0,1]: (v - min) / (max - min), order preserved.
// Throws DegenerateRange when max == min.
std::vector<double> normalize(std::span<const double> values);

}  // namespace tradecurve
