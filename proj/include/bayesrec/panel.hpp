#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

#include "bayesrec/hierarchy.hpp"

namespace bayesrec {

/// Aligned history: values(i, t) is node i at period t+1, node order matching
/// the hierarchy. No gaps; the same period range for every node. The data
/// need not be aggregate consistent.
struct SeriesPanel {
    std::vector<std::string> ids;
    Eigen::MatrixXd values;  // m x T

    int m() const { return static_cast<int>(values.rows()); }
    int t_len() const { return static_cast<int>(values.cols()); }
};

/// Independent one-step-ahead point forecasts for every node, for the period
/// just past the panel. Generally not aggregate consistent.
struct BaseForecasts {
    Eigen::VectorXd point;
    int horizon = 0;  // target period, panel T + 1
};

/// Per-node holdout mean squared errors (gamma) and the window size R that
/// produced them.
struct AccuracyVector {
    Eigen::VectorXd gamma;
    int holdout_window = 0;
};

enum class ForecastKind { Mean, RandomWalkDrift, SeasonalNaive, AutoAr };

struct ForecastMethod {
    ForecastKind kind = ForecastKind::AutoAr;
    int seasonal_period = 0;  // SeasonalNaive only, >= 2
};

/// Forecaster choice with optional per-node overrides keyed by node id.
struct ForecasterSpec {
    ForecastMethod default_method;
    std::unordered_map<std::string, ForecastMethod> overrides;

    const ForecastMethod& method_for(const std::string& id) const {
        auto it = overrides.find(id);
        return it == overrides.end() ? default_method : it->second;
    }
};

/// Parses "mean", "drift", "snaive:<period>", "auto-ar".
ForecastMethod parse_forecast_method(const std::string& text);
std::string forecast_method_name(const ForecastMethod& m);

/// One-step-ahead point forecast from the given history. Deterministic.
/// auto-AR fits AR(p), p <= 3, by conditional least squares and picks the
/// order with the smallest corrected information criterion.
double forecast_one_step(const Eigen::VectorXd& series, const ForecastMethod& method);

/// Rolling-holdout accuracy: R = max(1, floor(fraction * T)); for each node,
/// gamma is the mean over r = 1..R of the squared error of the one-step
/// forecast from the first T-r points against the held-out point T-r+1.
AccuracyVector historical_accuracy(const SeriesPanel& panel, const ForecasterSpec& spec,
                                   double holdout_fraction, int threads = 1);

/// Forecasts every node one step beyond the panel, independently.
BaseForecasts base_forecast_all(const SeriesPanel& panel, const ForecasterSpec& spec);

/// Builds a panel aligned to the hierarchy from per-id series of equal length.
SeriesPanel make_panel(const HierarchySpec& h,
                       const std::unordered_map<std::string, std::vector<double>>& series);

}  // namespace bayesrec
