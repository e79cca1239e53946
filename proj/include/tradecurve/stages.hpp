#pragma once

#include <span>
#include <string>
#include <vector>

#include "tradecurve/ingest.hpp"
#include "tradecurve/sigmoid_fit.hpp"

namespace tradecurve {

// The three points that carve a fitted curve into growth stages: the two
// non-trivial zeros of the third derivative (cut-offs) and the inflection
// point. Closed form:
//   x_left  = xmid - ln(2+sqrt(3))/rate    y_left  = asym / (3+sqrt(3))
//   x_mid   = xmid                         y_mid   = asym / 2
//   x_right = xmid + ln(2+sqrt(3))/rate    y_right = asym / (3-sqrt(3))
struct CriticalPoints {
    double x_left = 0.0;
    double y_left = 0.0;
    double x_mid = 0.0;
    double y_mid = 0.0;
    double x_right = 0.0;
    double y_right = 0.0;
};

enum class StageLabel { Initial, Acceleration, Final };

const char* stage_name(StageLabel label);

// Throws InvalidParams when asym <= 0 or rate <= 0.
CriticalPoints critical_points(const LogisticParams& params);

// Initial if x < x_left, Final if x > x_right, Acceleration otherwise.
// Both cut-off points belong to the acceleration stage.
StageLabel classify(double x, const CriticalPoints& cp);

struct StageCounts {
    int n_initial = 0;
    int n_acceleration = 0;
    int n_final = 0;
    std::vector<StageLabel> labels;  // parallel to the input panel

    int total() const { return n_initial + n_acceleration + n_final; }
};

// Classifies every observation of the panel by its log_gdp against the fit's
// critical points. Counts always sum to the panel size.
StageCounts stage_counts(std::span<const CountryObservation> panel,
                         const LogisticFit& fit);

}  // namespace tradecurve
