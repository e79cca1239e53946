#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradecurve/dynamics.hpp"
#include "tradecurve/ingest.hpp"
#include "tradecurve/stages.hpp"

namespace tradecurve {

// Doubles are serialized with 17 significant digits so round-trips are
// lossless; non-finite values become null.
std::string format_double(double v);

// Minimal streaming JSON emitter with deterministic key order.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& value(double v);
    JsonWriter& value(long long v);
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(std::size_t v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& null();

    const std::string& str() const { return out_; }

private:
    void separate();
    std::string out_;
    std::vector<int> counts_{0};  // items emitted per nesting level
    bool after_key_ = false;
};

// Writes to `<path>.tmp` and renames, so consumers never observe a partial
// file. Throws WriteFailed.
void atomic_write(const std::filesystem::path& path, std::string_view content);

// Document builders. All output is a pure function of the inputs.
std::string parse_report_json(const ParseReport& report,
                              const PanelJoinInfo* join = nullptr);
std::string error_json(std::string_view code, std::string_view message);

// Series element per the wire schema:
// {year, variable, A, k, XM, XL, XR, YL, YM, YR, r2, f,
//  proportions:[pI,pA,pF], normalized, y_min, y_max}
void append_series_element(JsonWriter& w, const YearlyResult& r);
std::string series_json(std::span<const YearlyResult> series);

// Series element plus fit diagnostics (n_points, iterations, converged) and
// stage counts.
std::string fit_json(const YearlyResult& r, const StageCounts& counts);

std::string powerlaw_json(int year, std::span<const PowerLawPair> pairs);

std::string stages_csv(std::span<const CountryObservation> panel,
                       const StageCounts& counts);
std::string stage_counts_json(const StageCounts& counts);

// Fig-1-style plot data: country, x, observed y, fitted y.
std::string fit_points_tsv(std::span<const CountryObservation> panel,
                           std::span<const XY> points,
                           const LogisticParams& params);

// Year-indexed plot data for the parameter/critical-point/proportion series.
std::string fig_params_tsv(std::span<const YearlyResult> series);       // A, k
std::string fig_critical_tsv(std::span<const YearlyResult> series);    // X/Y coords
std::string fig_proportions_tsv(std::span<const YearlyResult> series); // stage shares

}  // namespace tradecurve
