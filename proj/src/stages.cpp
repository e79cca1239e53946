#include "tradecurve/stages.hpp"

#include <cmath>

namespace tradecurve {

const char* stage_name(StageLabel label) {
    switch (label) {
        case StageLabel::Initial: return "Initial";
        case StageLabel::Acceleration: return "Acceleration";
        case StageLabel::Final: return "Final";
    }
    return "?";
}

CriticalPoints critical_points(const LogisticParams& params) {
    if (!(params.asym > 0.0) || !(params.rate > 0.0) || !std::isfinite(params.xmid))
        throw InvalidParams("critical points need asym > 0, rate > 0 and finite xmid");

    const double sqrt3 = std::sqrt(3.0);
    // ln(2 - sqrt(3)) = -ln(2 + sqrt(3)), so the cut-offs sit symmetrically
    // around the inflection point.
    const double half_width = std::log(2.0 + sqrt3) / params.rate;

    CriticalPoints cp;
    cp.x_left = params.xmid - half_width;
    cp.y_left = params.asym / (3.0 + sqrt3);
    cp.x_mid = params.xmid;
    cp.y_mid = params.asym / 2.0;
    cp.x_right = params.xmid + half_width;
    cp.y_right = params.asym / (3.0 - sqrt3);
    return cp;
}

StageLabel classify(double x, const CriticalPoints& cp) {
    if (x < cp.x_left) return StageLabel::Initial;
    if (x > cp.x_right) return StageLabel::Final;
    return StageLabel::Acceleration;
}

StageCounts stage_counts(std::span<const CountryObservation> panel,
                         const LogisticFit& fit) {
    if (panel.empty())
        throw EmptyPanel("stage counts need a non-empty panel");
    const CriticalPoints cp = critical_points(fit.params);

    StageCounts counts;
    counts.labels.reserve(panel.size());
    for (const CountryObservation& obs : panel) {
        const StageLabel label = classify(obs.log_gdp, cp);
        counts.labels.push_back(label);
        switch (label) {
            case StageLabel::Initial: ++counts.n_initial; break;
            case StageLabel::Acceleration: ++counts.n_acceleration; break;
            case StageLabel::Final: ++counts.n_final; break;
        }
    }
    return counts;
}

}  // namespace tradecurve
