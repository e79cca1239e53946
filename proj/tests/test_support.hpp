// Shared oracles and fixture builders for the test suites. Everything here is
// independent of the production code paths it is used to check: the critical
// points oracle only calls logistic_eval, and the fixtures are plain files.
#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "tradecurve/sigmoid_fit.hpp"

namespace testsupport {

using tradecurve::LogisticParams;
using tradecurve::XY;

// Third derivative of the logistic, differentiated by hand:
//   y''' = asym * rate^3 * s(1-s)(1 - 6s + 6s^2),  s = y/asym.
// Used only for sign probing; the closed-form solution of its zeros is what
// the production code computes and what the oracle must not rely on.
inline double third_derivative(const LogisticParams& p, double x) {
    const double s = tradecurve::logistic_eval(p, x) / p.asym;
    return p.asym * p.rate * p.rate * p.rate * s * (1.0 - s) *
           (1.0 - 6.0 * s + 6.0 * s * s);
}

// Bisection root of the third derivative in [lo, hi]; requires a sign change.
inline double bisect_third_derivative(const LogisticParams& p, double lo, double hi) {
    double flo = third_derivative(p, lo);
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = third_derivative(p, mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// n samples of the logistic on a uniform grid over [x_lo, x_hi], with
// optional additive Gaussian noise.
inline std::vector<XY> sample_logistic(const LogisticParams& p, double x_lo,
                                       double x_hi, int n,
                                       double noise_sd = 0.0,
                                       std::mt19937* rng = nullptr) {
    std::vector<XY> pts;
    pts.reserve(static_cast<std::size_t>(n));
    std::normal_distribution<double> noise(0.0, noise_sd);
    for (int i = 0; i < n; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (n - 1.0);
        double y = tradecurve::logistic_eval(p, x);
        if (noise_sd > 0.0 && rng) y += noise(*rng);
        pts.push_back({x, y});
    }
    return pts;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

// Synthetic S-curve data set: 40 countries whose export-goods counts follow a
// logistic in log10(GDP), plus dummy partner countries that have no GDP rows
// and therefore never enter a panel. Years 1994..1996.
struct ScurveFixture {
    std::filesystem::path trades;
    std::filesystem::path gdp;
    static constexpr int n_countries = 40;
    static constexpr double rate = 1.8;
    static constexpr double xmid = 10.7;
    static double asym_for(int year) { return 280.0 + 10.0 * (year - 1994); }
};

inline ScurveFixture write_scurve_fixture(const std::filesystem::path& dir) {
    std::string trades = "year,exporter,importer,sitc,value,quantity\n";
    std::string gdp = "year,country,gdp\n";
    char buf[128];
    for (int year = 1994; year <= 1996; ++year) {
        const double asym = ScurveFixture::asym_for(year);
        for (int i = 0; i < ScurveFixture::n_countries; ++i) {
            const double x = 8.0 + 5.0 * i / (ScurveFixture::n_countries - 1.0);
            const LogisticParams p{asym, ScurveFixture::rate, ScurveFixture::xmid};
            const int goods =
                static_cast<int>(std::lround(tradecurve::logistic_eval(p, x)));
            std::snprintf(buf, sizeof buf, "C%02d", i);
            const std::string code = buf;
            for (int j = 0; j < goods; ++j) {
                std::snprintf(buf, sizeof buf, "%d,%s,D%d,E%04d,%d,\n", year,
                              code.c_str(), j % 3, j, 100 + j);
                trades += buf;
            }
            // one import per country so zero-exporters still appear in flows
            std::snprintf(buf, sizeof buf, "%d,ZS,%s,M0001,50,\n", year, code.c_str());
            trades += buf;
            if (year == 1994) {
                // GDP is constant across the fixture years
                for (int y = 1994; y <= 1996; ++y) {
                    std::snprintf(buf, sizeof buf, "%d,%s,%.17g\n", y, code.c_str(),
                                  std::pow(10.0, x));
                    gdp += buf;
                }
            }
        }
    }
    std::filesystem::create_directories(dir);
    ScurveFixture fx;
    fx.trades = dir / "trades.csv";
    fx.gdp = dir / "gdp.csv";
    write_file(fx.trades, trades);
    write_file(fx.gdp, gdp);
    return fx;
}

// Exact power-law data set: four countries B1..B4 where country b has
// importer_partners = b^2, exporter_partners = b^3, import_goods = b^4 and
// export_goods = b^6, so every tracked pair is an exact power law with c = 1.
struct PowerLawFixture {
    std::filesystem::path trades;
    std::filesystem::path gdp;
    static constexpr int year = 1995;
};

inline PowerLawFixture write_powerlaw_fixture(const std::filesystem::path& dir) {
    std::string trades = "year,exporter,importer,sitc,value,quantity\n";
    std::string gdp = "year,country,gdp\n";
    char buf[128];
    for (int b = 1; b <= 4; ++b) {
        std::snprintf(buf, sizeof buf, "B%d", b);
        const std::string code = buf;
        const int sources = b * b;
        const int import_goods = sources * sources;
        const int destinations = b * b * b;
        const int export_goods = destinations * destinations;
        for (int j = 0; j < import_goods; ++j) {
            std::snprintf(buf, sizeof buf, "%d,S%02d,%s,M%04d,10,\n",
                          PowerLawFixture::year, j % sources, code.c_str(), j);
            trades += buf;
        }
        for (int j = 0; j < export_goods; ++j) {
            std::snprintf(buf, sizeof buf, "%d,%s,T%02d,E%04d,10,\n",
                          PowerLawFixture::year, code.c_str(), j % destinations, j);
            trades += buf;
        }
        std::snprintf(buf, sizeof buf, "%d,%s,%.17g\n", PowerLawFixture::year,
                      code.c_str(), std::pow(10.0, 8.0 + b));
        gdp += buf;
    }
    std::filesystem::create_directories(dir);
    PowerLawFixture fx;
    fx.trades = dir / "trades.csv";
    fx.gdp = dir / "gdp.csv";
    write_file(fx.trades, trades);
    write_file(fx.gdp, gdp);
    return fx;
}

// Unique-enough scratch directory for a test run.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("tradecurve_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testsupport
