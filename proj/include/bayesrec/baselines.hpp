#pragma once

#include <Eigen/Dense>
#include <string>

#include "bayesrec/hierarchy.hpp"
#include "bayesrec/panel.hpp"

namespace bayesrec {

enum class BaselineMethod { BottomUp, TopDown, Ols, Wls };

std::string baseline_name(BaselineMethod m);

/// Reconciled forecast from one of the competitor methods; full == S * bottom
/// exactly.
struct BaselineResult {
    BaselineMethod method = BaselineMethod::BottomUp;
    Eigen::VectorXd full;
    Eigen::VectorXd bottom;
};

/// Keeps the bottom-level base forecasts and re-aggregates.
BaselineResult bottom_up(const SummingMatrix& s, const BaseForecasts& yhat);

/// Splits the root base forecast across leaves by the average of historical
/// per-period shares (renormalized to sum to one exactly). The root history
/// must be strictly positive.
BaselineResult top_down(const SummingMatrix& s, const HierarchySpec& h, const SeriesPanel& panel,
                        const BaseForecasts& yhat);

/// Identity-covariance least-squares projection onto the consistent subspace.
BaselineResult ols_reconcile(const SummingMatrix& s, const BaseForecasts& yhat);

/// Accuracy-weighted least squares with Lambda = diag(max(gamma, floor)).
BaselineResult wls_reconcile(const SummingMatrix& s, const AccuracyVector& gamma,
                             const BaseForecasts& yhat);

}  // namespace bayesrec
