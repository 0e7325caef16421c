#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bayesrec/hierarchy.hpp"
#include "bayesrec/posterior.hpp"

namespace bayesrec {

enum class LossKind { WeightedSquared, AsymmetricLinear };
enum class SelectionMode { DrawArgmin, PosteriorMean };

/// Per-node heterogeneous loss: weighted squared error, or weighted
/// asymmetric linear error with per-node under/over costs.
struct LossSpec {
    LossKind kind = LossKind::WeightedSquared;
    Eigen::VectorXd weights;      // length m, nonnegative, not all zero
    Eigen::VectorXd under_cost;   // asymmetric only, > 0
    Eigen::VectorXd over_cost;    // asymmetric only, > 0
};

/// Aggregate-consistent revised point forecast; full == S * bottom exactly.
struct RevisedForecast {
    Eigen::VectorXd full;
    Eigen::VectorXd bottom;
    double expected_loss = 0.0;
    SelectionMode mode = SelectionMode::PosteriorMean;
    int draw_index = -1;  // DrawArgmin only
};

double loss(const Eigen::VectorXd& candidate, const Eigen::VectorXd& target,
            const LossSpec& spec);

/// Picks the revised forecast minimizing the average loss against the
/// posterior draws. DrawArgmin restricts candidates to the draws themselves
/// (ties broken by the lowest draw index); PosteriorMean (weighted-squared
/// only) uses the mean of the bottom-level draws, whose image under S is the
/// unrestricted minimizer.
RevisedForecast select_point(const PosteriorDraws& draws, const SummingMatrix& s,
                             const LossSpec& spec, SelectionMode mode, int threads = 1);

/// Uniform squared loss, weight 1/m per node.
LossSpec default_loss(const HierarchySpec& h);

/// Loss specification document: {"kind": "weighted-squared"|"asymmetric-linear",
/// "weights": {id: w, ...}, "asymmetry": {id: {"under": u, "over": o}, ...}}.
/// Missing weights default to 0 when any weight is given, else uniform.
LossSpec parse_loss_spec(const std::string& json_text, const HierarchySpec& h);

SelectionMode default_mode(const LossSpec& spec);

}  // namespace bayesrec
