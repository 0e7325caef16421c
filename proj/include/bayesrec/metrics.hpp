#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "bayesrec/hierarchy.hpp"
#include "bayesrec/panel.hpp"

namespace bayesrec {

enum class ReconClass { Easy, Hard, Neither };

std::string recon_class_name(ReconClass c);

/// Diagnostics of one dataset: per-node absolute relative base-forecast error
/// (larger = harder to forecast; NaN where the truth is zero) and per-internal-
/// node absolute add-up gap of the base forecasts.
struct DatasetScore {
    Eigen::VectorXd forecastability;                 // per node
    std::unordered_map<int, double> agg_consistency;  // per internal node
    ReconClass cls = ReconClass::Neither;
};

struct EvaluationWeights {
    Eigen::VectorXd weights;  // nonnegative, summing to 1 (or a single 1)
};

enum class ErrorKind { MeanAbsRelative, RootMeanSquaredRelative };

struct ClassifyResult {
    std::vector<ReconClass> classes;
    bool degenerate = false;  // an all-equal metric forced everything to Neither
};

/// |(yhat - y) / y|; rejects y == 0.
double forecastability(double yhat_i, double y_i);

/// |sum of children's base forecasts - node's base forecast|; internal nodes
/// only.
double aggregate_consistency(const BaseForecasts& yhat, const HierarchySpec& h, int node);

/// Builds the full score for one dataset given its base forecasts and truth.
DatasetScore score_dataset(const BaseForecasts& yhat, const Eigen::VectorXd& truth,
                           const HierarchySpec& h);

/// Joint quantile split on the focus node's two metrics: easy = both strictly
/// below their q_low quantiles, hard = both strictly above their q_high
/// quantiles, otherwise neither.
ClassifyResult classify_datasets(const std::vector<DatasetScore>& scores, int focus_node,
                                 double q_low, double q_high);

/// Weighted relative error of a revised forecast against the truth.
double evaluate(const Eigen::VectorXd& revised, const Eigen::VectorXd& truth,
                const EvaluationWeights& w, ErrorKind kind = ErrorKind::MeanAbsRelative);

struct RelativeErrorTable {
    std::vector<std::pair<std::string, double>> entries;  // method -> error / BR error
    bool br_zero = false;  // BR mean error was 0; entries hold absolute errors
};

/// Normalizes per-method mean errors by the BR entry (BR becomes 1.00).
RelativeErrorTable relative_error_table(const std::map<std::string, double>& mean_errors);

}  // namespace bayesrec
