#include "tradecurve/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace tradecurve {

namespace {

struct Accumulator {
    std::unordered_map<std::string, double> export_value_by_category;
    std::unordered_set<std::string> import_categories;
    std::unordered_set<std::string> export_partners;
    std::unordered_set<std::string> import_partners;
};

DiversityProfile to_profile(const std::string& country, int year,
                            const Accumulator& acc) {
    DiversityProfile p;
    p.country = country;
    p.year = year;
    p.export_goods = static_cast<int>(acc.export_value_by_category.size());
    p.import_goods = static_cast<int>(acc.import_categories.size());
    p.exporter_partners = static_cast<int>(acc.export_partners.size());
    p.importer_partners = static_cast<int>(acc.import_partners.size());

    double total = 0.0;
    for (const auto& [cat, v] : acc.export_value_by_category) total += v;
    if (total > 0.0) {
        double h = 0.0;
        for (const auto& [cat, v] : acc.export_value_by_category) {
            if (v <= 0.0) continue;
            const double share = v / total;
            h -= share * std::log(share);
        }
        p.shannon_export = std::max(h, 0.0);  // -0.0 from a single category
    }
    return p;
}

}  // namespace

std::map<std::string, DiversityProfile> profile_all(
    std::span<const TradeFlow> trades, int year, const Crosswalk* crosswalk) {
    std::map<std::string, Accumulator> acc;
    auto mapped = [&](const std::string& code) -> const std::string& {
        return crosswalk ? crosswalk->apply(code) : code;
    };
    for (const TradeFlow& flow : trades) {
        if (flow.year != year) continue;
        const std::string& exp = mapped(flow.exporter);
        const std::string& imp = mapped(flow.importer);
        // Presence alone creates the entry; zero-value flows add no counts.
        Accumulator& e = acc[exp];
        Accumulator& i = acc[imp];
        if (flow.value <= 0.0) continue;
        e.export_value_by_category[flow.category] += flow.value;
        e.export_partners.insert(imp);
        i.import_categories.insert(flow.category);
        i.import_partners.insert(exp);
    }
    std::map<std::string, DiversityProfile> out;
    for (const auto& [country, a] : acc)
        out.emplace(country, to_profile(country, year, a));
    return out;
}

DiversityProfile profile(std::span<const TradeFlow> trades,
                         const std::string& country, int year) {
    Accumulator acc;
    for (const TradeFlow& flow : trades) {
        if (flow.year != year || flow.value <= 0.0) continue;
        if (flow.exporter == country) {
            acc.export_value_by_category[flow.category] += flow.value;
            acc.export_partners.insert(flow.importer);
        }
        if (flow.importer == country) {
            acc.import_categories.insert(flow.category);
            acc.import_partners.insert(flow.exporter);
        }
    }
    return to_profile(country, year, acc);
}

double shannon_entropy(std::span<const TradeFlow> trades,
                       const std::string& country, int year) {
    const DiversityProfile p = profile(trades, country, year);
    if (!p.shannon_export)
        throw NoExports("country '" + country + "' has no positive export value in " +
                        std::to_string(year));
    return *p.shannon_export;
}

std::vector<double> normalize(std::span<const double> values) {
    if (values.empty())
        throw DegenerateRange("min-max normalization needs a non-empty input");
    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    if (*min_it == *max_it)
        throw DegenerateRange("min-max normalization needs at least two distinct values");
    const double lo = *min_it;
    const double span = *max_it - lo;
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back((v - lo) / span);
    return out;
}

}  // namespace tradecurve
