#include "bayesrec/panel.hpp"

#include <cmath>
#include <limits>

#include "bayesrec/errors.hpp"
#include "bayesrec/parallel.hpp"

namespace bayesrec {

namespace {

double mean_of(const Eigen::VectorXd& y) { return y.mean(); }

double drift_forecast(const Eigen::VectorXd& y) {
    const auto n = y.size();
    if (n == 1) return y(0);
    const double drift = (y(n - 1) - y(0)) / static_cast<double>(n - 1);
    return y(n - 1) + drift;
}

double seasonal_naive(const Eigen::VectorXd& y, int period) {
    if (period < 2) throw ValidationError("seasonal-naive requires period >= 2");
    if (y.size() < period)
        throw ValidationError("series too short for seasonal-naive with period " +
                              std::to_string(period) + " (have " + std::to_string(y.size()) +
                              " points)");
    return y(y.size() - period);
}

// Conditional least-squares AR(p) with intercept; returns the one-step
// forecast and the corrected information criterion used to rank orders.
struct ArFit {
    double forecast = 0.0;
    double aicc = std::numeric_limits<double>::infinity();
    bool ok = false;
};

ArFit fit_ar(const Eigen::VectorXd& y, int p) {
    ArFit fit;
    const int n = static_cast<int>(y.size());
    const int rows = n - p;
    const int k = p + 2;  // intercept + p coefficients + variance
    if (rows < p + 2 || rows - k - 1 <= 0) return fit;

    Eigen::MatrixXd x(rows, p + 1);
    Eigen::VectorXd target(rows);
    for (int t = 0; t < rows; ++t) {
        x(t, 0) = 1.0;
        for (int lag = 1; lag <= p; ++lag) x(t, lag) = y(p + t - lag);
        target(t) = y(p + t);
    }
    Eigen::MatrixXd xtx = x.transpose() * x;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    if (ldlt.info() != Eigen::Success) return fit;
    Eigen::VectorXd coef = ldlt.solve(x.transpose() * target);

    const double sse = (target - x * coef).squaredNorm();
    const double nn = static_cast<double>(rows);
    const double var = std::max(sse / nn, 1e-300);
    fit.aicc = nn * std::log(var) + 2.0 * k + 2.0 * k * (k + 1.0) / (nn - k - 1.0);

    fit.forecast = coef(0);
    for (int lag = 1; lag <= p; ++lag) fit.forecast += coef(lag) * y(n - lag);
    fit.ok = true;
    return fit;
}

double auto_ar_forecast(const Eigen::VectorXd& y) {
    if (y.size() < 3)
        throw ValidationError("series too short for auto-AR (need >= 3 points, have " +
                              std::to_string(y.size()) + ")");
    ArFit best;
    for (int p = 0; p <= 3; ++p) {
        ArFit fit = fit_ar(y, p);
        if (fit.ok && fit.aicc < best.aicc) best = fit;
    }
    if (!std::isfinite(best.aicc)) return mean_of(y);  // nothing fit; constant fallback
    return best.forecast;
}

}  // namespace

ForecastMethod parse_forecast_method(const std::string& text) {
    ForecastMethod m;
    if (text == "mean") {
        m.kind = ForecastKind::Mean;
    } else if (text == "drift") {
        m.kind = ForecastKind::RandomWalkDrift;
    } else if (text == "auto-ar") {
        m.kind = ForecastKind::AutoAr;
    } else if (text.rfind("snaive:", 0) == 0) {
        m.kind = ForecastKind::SeasonalNaive;
        try {
            m.seasonal_period = std::stoi(text.substr(7));
        } catch (...) {
            throw ValidationError("cannot parse seasonal period in '" + text + "'");
        }
        if (m.seasonal_period < 2)
            throw ValidationError("seasonal-naive period must be >= 2, got " + text);
    } else {
        throw ValidationError("unknown forecaster '" + text +
                              "' (expected mean, drift, snaive:<period>, auto-ar)");
    }
    return m;
}

std::string forecast_method_name(const ForecastMethod& m) {
    switch (m.kind) {
        case ForecastKind::Mean: return "mean";
        case ForecastKind::RandomWalkDrift: return "drift";
        case ForecastKind::SeasonalNaive:
            return "snaive:" + std::to_string(m.seasonal_period);
        case ForecastKind::AutoAr: return "auto-ar";
    }
    return "?";
}

double forecast_one_step(const Eigen::VectorXd& series, const ForecastMethod& method) {
    if (series.size() < 1) throw ValidationError("cannot forecast an empty series");
    switch (method.kind) {
        case ForecastKind::Mean: return mean_of(series);
        case ForecastKind::RandomWalkDrift: return drift_forecast(series);
        case ForecastKind::SeasonalNaive: return seasonal_naive(series, method.seasonal_period);
        case ForecastKind::AutoAr: return auto_ar_forecast(series);
    }
    throw ValidationError("unknown forecast method");
}

AccuracyVector historical_accuracy(const SeriesPanel& panel, const ForecasterSpec& spec,
                                   double holdout_fraction, int threads) {
    const int t_len = panel.t_len();
    if (t_len < 10)
        throw ValidationError("historical accuracy needs T >= 10 periods, have " +
                              std::to_string(t_len));
    if (!(holdout_fraction > 0.0 && holdout_fraction <= 0.5))
        throw ValidationError("holdout fraction must be in (0, 0.5]");
    const int window = std::max(1, static_cast<int>(std::floor(holdout_fraction * t_len)));

    AccuracyVector acc;
    acc.holdout_window = window;
    acc.gamma.resize(panel.m());
    parallel_for(static_cast<std::size_t>(panel.m()), threads, [&](std::size_t i) {
        const auto& method = spec.method_for(panel.ids[i]);
        const Eigen::VectorXd row = panel.values.row(static_cast<Eigen::Index>(i));
        double sum_sq = 0.0;
        for (int r = 1; r <= window; ++r) {
            const int prefix = t_len - r;
            double fc;
            try {
                fc = forecast_one_step(row.head(prefix), method);
            } catch (const ValidationError& e) {
                throw ValidationError("node '" + panel.ids[i] + "', holdout step " +
                                      std::to_string(r) + ": " + e.what());
            }
            const double err = fc - row(prefix);
            sum_sq += err * err;
        }
        acc.gamma(static_cast<Eigen::Index>(i)) = sum_sq / window;
    });
    return acc;
}

BaseForecasts base_forecast_all(const SeriesPanel& panel, const ForecasterSpec& spec) {
    if (panel.m() == 0 || panel.t_len() == 0) throw ValidationError("empty panel");
    BaseForecasts out;
    out.horizon = panel.t_len() + 1;
    out.point.resize(panel.m());
    for (int i = 0; i < panel.m(); ++i) {
        try {
            out.point(i) = forecast_one_step(panel.values.row(i), spec.method_for(panel.ids[i]));
        } catch (const ValidationError& e) {
            throw ValidationError("node '" + panel.ids[i] + "': " + e.what());
        }
    }
    return out;
}

SeriesPanel make_panel(const HierarchySpec& h,
                       const std::unordered_map<std::string, std::vector<double>>& series) {
    SeriesPanel panel;
    panel.ids.reserve(h.nodes.size());
    std::size_t t_len = 0;
    for (const auto& node : h.nodes) {
        auto it = series.find(node.id);
        if (it == series.end())
            throw ValidationError("panel is missing node '" + node.id + "'");
        if (panel.ids.empty()) {
            t_len = it->second.size();
            panel.values.resize(h.m, static_cast<Eigen::Index>(t_len));
        } else if (it->second.size() != t_len) {
            throw ValidationError("node '" + node.id + "' has " +
                                  std::to_string(it->second.size()) + " periods, expected " +
                                  std::to_string(t_len));
        }
        for (std::size_t t = 0; t < t_len; ++t) {
            const double v = it->second[t];
            if (!std::isfinite(v))
                throw ValidationError("node '" + node.id + "' has a non-finite value at period " +
                                      std::to_string(t + 1));
            panel.values(static_cast<Eigen::Index>(panel.ids.size()),
                         static_cast<Eigen::Index>(t)) = v;
        }
        panel.ids.push_back(node.id);
    }
    return panel;
}

}  // namespace bayesrec
