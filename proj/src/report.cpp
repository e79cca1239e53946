#include "tradecurve/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace tradecurve {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void JsonWriter::separate() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (counts_.back() > 0) out_ += ',';
    ++counts_.back();
}

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += '{';
    counts_.push_back(0);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    counts_.pop_back();
    out_ += '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += '[';
    counts_.push_back(0);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    counts_.pop_back();
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
    if (counts_.back() > 0) out_ += ',';
    ++counts_.back();
    out_ += '"';
    out_ += name;  // keys here are plain identifiers, no escaping needed
    out_ += "\":";
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separate();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    separate();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separate();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    separate();
    out_ += '"';
    for (char c : v) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\r': out_ += "\\r"; break;
            case '\t': out_ += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out_ += buf;
                } else {
                    out_ += c;
                }
        }
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::null() {
    separate();
    out_ += "null";
    return *this;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw WriteFailed("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw WriteFailed("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw WriteFailed("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string parse_report_json(const ParseReport& report, const PanelJoinInfo* join) {
    JsonWriter w;
    w.begin_object();
    w.key("rows_total").value(report.rows_total);
    w.key("rows_bad").value(report.rows_bad);
    w.key("self_flows").value(report.self_flows);
    w.key("bad_samples").begin_array();
    for (const std::string& s : report.bad_samples) w.value(s);
    w.end_array();
    if (join) {
        w.key("excluded_trade_only").begin_array();
        for (const std::string& s : join->trade_only) w.value(s);
        w.end_array();
        w.key("excluded_gdp_only").begin_array();
        for (const std::string& s : join->gdp_only) w.value(s);
        w.end_array();
    }
    w.end_object();
    return w.str() + "\n";
}

std::string error_json(std::string_view code, std::string_view message) {
    JsonWriter w;
    w.begin_object();
    w.key("error").value(code);
    w.key("message").value(message);
    w.end_object();
    return w.str() + "\n";
}

void append_series_element(JsonWriter& w, const YearlyResult& r) {
    w.begin_object();
    w.key("year").value(r.year);
    w.key("variable").value(variable_token(r.variable));
    w.key("A").value(r.fit.params.asym);
    w.key("k").value(r.fit.params.rate);
    w.key("XM").value(r.fit.params.xmid);
    w.key("XL").value(r.cp.x_left);
    w.key("XR").value(r.cp.x_right);
    w.key("YL").value(r.cp.y_left);
    w.key("YM").value(r.cp.y_mid);
    w.key("YR").value(r.cp.y_right);
    w.key("r2").value(r.fit.r_squared);
    w.key("f").value(r.fit.f_value);
    w.key("proportions").begin_array();
    for (double p : r.proportions) w.value(p);
    w.end_array();
    w.key("normalized").value(r.normalized);
    w.key("y_min").value(r.y_min);
    w.key("y_max").value(r.y_max);
    w.end_object();
}

std::string series_json(std::span<const YearlyResult> series) {
    JsonWriter w;
    w.begin_array();
    for (const YearlyResult& r : series) append_series_element(w, r);
    w.end_array();
    return w.str() + "\n";
}

std::string fit_json(const YearlyResult& r, const StageCounts& counts) {
    JsonWriter w;
    w.begin_object();
    w.key("year").value(r.year);
    w.key("variable").value(variable_token(r.variable));
    w.key("A").value(r.fit.params.asym);
    w.key("k").value(r.fit.params.rate);
    w.key("XM").value(r.fit.params.xmid);
    w.key("XL").value(r.cp.x_left);
    w.key("XR").value(r.cp.x_right);
    w.key("YL").value(r.cp.y_left);
    w.key("YM").value(r.cp.y_mid);
    w.key("YR").value(r.cp.y_right);
    w.key("r2").value(r.fit.r_squared);
    w.key("f").value(r.fit.f_value);
    w.key("proportions").begin_array();
    for (double p : r.proportions) w.value(p);
    w.end_array();
    w.key("normalized").value(r.normalized);
    w.key("y_min").value(r.y_min);
    w.key("y_max").value(r.y_max);
    w.key("n_points").value(r.fit.n_points);
    w.key("iterations").value(r.fit.iterations);
    w.key("converged").value(r.fit.converged);
    w.key("stage_counts").begin_object();
    w.key("initial").value(counts.n_initial);
    w.key("acceleration").value(counts.n_acceleration);
    w.key("final").value(counts.n_final);
    w.end_object();
    w.end_object();
    return w.str() + "\n";
}

std::string powerlaw_json(int year, std::span<const PowerLawPair> pairs) {
    JsonWriter w;
    w.begin_object();
    w.key("year").value(year);
    w.key("pairs").begin_array();
    for (const PowerLawPair& p : pairs) {
        w.begin_object();
        w.key("x").value(variable_token(p.x));
        w.key("y").value(variable_token(p.y));
        if (p.fit) {
            w.key("c").value(p.fit->c);
            w.key("gamma").value(p.fit->gamma);
            w.key("r2").value(p.fit->r_squared);
            w.key("n_points").value(p.fit->n_points);
            w.key("n_excluded").value(p.fit->n_excluded);
            w.key("scaling").value(scaling_tag(p.fit->gamma));
        } else {
            w.key("error").value(p.error);
        }
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

std::string stages_csv(std::span<const CountryObservation> panel,
                       const StageCounts& counts) {
    std::string out = "country,year,x,stage\n";
    for (std::size_t i = 0; i < panel.size(); ++i) {
        out += panel[i].country;
        out += ',';
        out += std::to_string(panel[i].year);
        out += ',';
        out += format_double(panel[i].log_gdp);
        out += ',';
        out += stage_name(counts.labels[i]);
        out += '\n';
    }
    return out;
}

std::string stage_counts_json(const StageCounts& counts) {
    JsonWriter w;
    w.begin_object();
    w.key("initial").value(counts.n_initial);
    w.key("acceleration").value(counts.n_acceleration);
    w.key("final").value(counts.n_final);
    w.key("total").value(counts.total());
    w.end_object();
    return w.str() + "\n";
}

std::string fit_points_tsv(std::span<const CountryObservation> panel,
                           std::span<const XY> points,
                           const LogisticParams& params) {
    std::string out = "country\tx\ty_observed\ty_fitted\n";
    for (std::size_t i = 0; i < panel.size(); ++i) {
        out += panel[i].country;
        out += '\t';
        out += format_double(points[i].x);
        out += '\t';
        out += format_double(points[i].y);
        out += '\t';
        out += format_double(logistic_eval(params, points[i].x));
        out += '\n';
    }
    return out;
}

std::string fig_params_tsv(std::span<const YearlyResult> series) {
    std::string out = "year\tA\tk\tr2\n";
    for (const YearlyResult& r : series) {
        out += std::to_string(r.year);
        out += '\t';
        out += format_double(r.fit.params.asym);
        out += '\t';
        out += format_double(r.fit.params.rate);
        out += '\t';
        out += format_double(r.fit.r_squared);
        out += '\n';
    }
    return out;
}

std::string fig_critical_tsv(std::span<const YearlyResult> series) {
    std::string out = "year\tXL\tXM\tXR\tYL\tYM\tYR\n";
    for (const YearlyResult& r : series) {
        out += std::to_string(r.year);
        out += '\t';
        out += format_double(r.cp.x_left);
        out += '\t';
        out += format_double(r.cp.x_mid);
        out += '\t';
        out += format_double(r.cp.x_right);
        out += '\t';
        out += format_double(r.cp.y_left);
        out += '\t';
        out += format_double(r.cp.y_mid);
        out += '\t';
        out += format_double(r.cp.y_right);
        out += '\n';
    }
    return out;
}

std::string fig_proportions_tsv(std::span<const YearlyResult> series) {
    std::string out = "year\tp_initial\tp_acceleration\tp_final\n";
    for (const YearlyResult& r : series) {
        out += std::to_string(r.year);
        out += '\t';
        out += format_double(r.proportions[0]);
        out += '\t';
        out += format_double(r.proportions[1]);
        out += '\t';
        out += format_double(r.proportions[2]);
        out += '\n';
    }
    return out;
}

}  // namespace tradecurve
