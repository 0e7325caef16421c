#include "bayesrec/baselines.hpp"

#include "bayesrec/covariance.hpp"
#include "bayesrec/errors.hpp"

namespace bayesrec {

namespace {

BaselineResult from_bottom(BaselineMethod method, const SummingMatrix& s,
                           const Eigen::VectorXd& bottom) {
    BaselineResult r;
    r.method = method;
    r.bottom = bottom;
    r.full = s.entries * bottom;
    return r;
}

Eigen::VectorXd weighted_projection(const SummingMatrix& s, const Eigen::VectorXd& inv_weights,
                                    const Eigen::VectorXd& yhat) {
    // bottom = (S' W S)^-1 S' W yhat with W = diag(inv_weights).
    const Eigen::MatrixXd ws = inv_weights.asDiagonal() * s.entries;
    Eigen::MatrixXd normal = s.entries.transpose() * ws;
    normal = 0.5 * (normal + normal.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success)
        throw NumericalError("least-squares normal matrix is not positive definite");
    return llt.solve(ws.transpose() * yhat);
}

}  // namespace

std::string baseline_name(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::BottomUp: return "BU";
        case BaselineMethod::TopDown: return "TD";
        case BaselineMethod::Ols: return "OLS";
        case BaselineMethod::Wls: return "WLS";
    }
    return "?";
}

BaselineResult bottom_up(const SummingMatrix& s, const BaseForecasts& yhat) {
    if (yhat.point.size() != s.rows())
        throw ValidationError("base forecast length does not match node count");
    const Eigen::Index m_k = s.cols();
    return from_bottom(BaselineMethod::BottomUp, s, yhat.point.tail(m_k));
}

BaselineResult top_down(const SummingMatrix& s, const HierarchySpec& h, const SeriesPanel& panel,
                        const BaseForecasts& yhat) {
    if (panel.t_len() < 1) throw ValidationError("top-down needs at least one history period");
    const int root = h.root();
    Eigen::VectorXd shares = Eigen::VectorXd::Zero(h.m_k);
    for (int t = 0; t < panel.t_len(); ++t) {
        const double root_value = panel.values(root, t);
        if (root_value <= 0.0)
            throw ValidationError("top-down requires a strictly positive root history; period " +
                                  std::to_string(t + 1) + " has value " +
                                  std::to_string(root_value));
        for (int j = 0; j < h.m_k; ++j)
            shares(j) += panel.values(h.bottom_index[j], t) / root_value;
    }
    shares /= panel.t_len();
    shares /= shares.sum();  // exact unit sum so the root is preserved
    return from_bottom(BaselineMethod::TopDown, s, shares * yhat.point(root));
}

BaselineResult ols_reconcile(const SummingMatrix& s, const BaseForecasts& yhat) {
    if (s.rows() <= s.cols())
        throw ValidationError("reconciliation needs more nodes than leaves (m > m_K)");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.rows());
    return from_bottom(BaselineMethod::Ols, s, weighted_projection(s, ones, yhat.point));
}

BaselineResult wls_reconcile(const SummingMatrix& s, const AccuracyVector& gamma,
                             const BaseForecasts& yhat) {
    if (s.rows() <= s.cols())
        throw ValidationError("reconciliation needs more nodes than leaves (m > m_K)");
    if (gamma.gamma.size() != s.rows())
        throw ValidationError("gamma length does not match node count");
    const double floor = accuracy_floor(gamma.gamma);
    const Eigen::VectorXd lambda_inv = gamma.gamma.cwiseMax(floor).cwiseInverse();
    return from_bottom(BaselineMethod::Wls, s, weighted_projection(s, lambda_inv, yhat.point));
}

}  // namespace bayesrec
