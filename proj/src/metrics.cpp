#include "bayesrec/metrics.hpp"

#include <cmath>
#include <limits>

#include "bayesrec/errors.hpp"
#include "bayesrec/posterior.hpp"

namespace bayesrec {

std::string recon_class_name(ReconClass c) {
    switch (c) {
        case ReconClass::Easy: return "easy";
        case ReconClass::Hard: return "hard";
        case ReconClass::Neither: return "neither";
    }
    return "?";
}

double forecastability(double yhat_i, double y_i) {
    if (y_i == 0.0)
        throw ValidationError("forecastability is undefined for a zero truth value");
    return std::abs((yhat_i - y_i) / y_i);
}

double aggregate_consistency(const BaseForecasts& yhat, const HierarchySpec& h, int node) {
    if (node < 0 || node >= h.m) throw ValidationError("node index out of range");
    const NodeRecord& rec = h.node(node);
    if (rec.is_leaf())
        throw ValidationError("aggregate consistency is defined for internal nodes; '" + rec.id +
                              "' is a leaf");
    double child_sum = 0.0;
    for (int c : rec.children) child_sum += yhat.point(c);
    return std::abs(child_sum - yhat.point(node));
}

DatasetScore score_dataset(const BaseForecasts& yhat, const Eigen::VectorXd& truth,
                           const HierarchySpec& h) {
    if (yhat.point.size() != h.m || truth.size() != h.m)
        throw ValidationError("score_dataset: length mismatch");
    DatasetScore score;
    score.forecastability.resize(h.m);
    for (int i = 0; i < h.m; ++i)
        score.forecastability(i) = truth(i) == 0.0
                                       ? std::numeric_limits<double>::quiet_NaN()
                                       : forecastability(yhat.point(i), truth(i));
    for (int i = 0; i < h.m; ++i)
        if (!h.node(i).is_leaf()) score.agg_consistency[i] = aggregate_consistency(yhat, h, i);
    return score;
}

ClassifyResult classify_datasets(const std::vector<DatasetScore>& scores, int focus_node,
                                 double q_low, double q_high) {
    if (!(q_low < q_high)) throw ValidationError("classification needs q_low < q_high");
    if (scores.size() < 20)
        throw ValidationError("classification needs at least 20 datasets for stable quantiles");

    std::vector<double> f, a;
    f.reserve(scores.size());
    a.reserve(scores.size());
    for (const auto& s : scores) {
        if (focus_node < 0 || focus_node >= s.forecastability.size())
            throw ValidationError("focus node out of range");
        auto it = s.agg_consistency.find(focus_node);
        if (it == s.agg_consistency.end())
            throw ValidationError("focus node must be internal (needs an add-up gap metric)");
        const double fv = s.forecastability(focus_node);
        if (std::isnan(fv))
            throw ValidationError("focus node has an undefined forecastability (zero truth)");
        f.push_back(fv);
        a.push_back(it->second);
    }

    ClassifyResult result;
    const double f_lo = empirical_quantile(f, q_low);
    const double f_hi = empirical_quantile(f, q_high);
    const double a_lo = empirical_quantile(a, q_low);
    const double a_hi = empirical_quantile(a, q_high);

    const bool f_flat = f_lo == f_hi;
    const bool a_flat = a_lo == a_hi;
    result.degenerate = f_flat || a_flat;

    result.classes.resize(scores.size(), ReconClass::Neither);
    for (std::size_t d = 0; d < scores.size(); ++d) {
        if (f[d] < f_lo && a[d] < a_lo)
            result.classes[d] = ReconClass::Easy;
        else if (f[d] > f_hi && a[d] > a_hi)
            result.classes[d] = ReconClass::Hard;
    }
    return result;
}

double evaluate(const Eigen::VectorXd& revised, const Eigen::VectorXd& truth,
                const EvaluationWeights& w, ErrorKind kind) {
    if (revised.size() != truth.size() || w.weights.size() != truth.size())
        throw ValidationError("evaluate: length mismatch");
    const double max_abs = truth.cwiseAbs().maxCoeff();
    const double eps = 1e-12 * (max_abs > 0.0 ? max_abs : 1.0);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        const double rel = (revised(i) - truth(i)) / std::max(std::abs(truth(i)), eps);
        acc += kind == ErrorKind::MeanAbsRelative ? w.weights(i) * std::abs(rel)
                                                  : w.weights(i) * rel * rel;
    }
    return kind == ErrorKind::MeanAbsRelative ? acc : std::sqrt(acc);
}

RelativeErrorTable relative_error_table(const std::map<std::string, double>& mean_errors) {
    auto br = mean_errors.find("BR");
    if (br == mean_errors.end())
        throw ValidationError("relative error table needs a BR entry to normalize by");
    RelativeErrorTable table;
    table.br_zero = br->second == 0.0;
    for (const auto& [method, err] : mean_errors)
        table.entries.emplace_back(method, table.br_zero ? err : err / br->second);
    return table;
}

}  // namespace bayesrec
