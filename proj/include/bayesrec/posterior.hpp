#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bayesrec/covariance.hpp"
#include "bayesrec/hierarchy.hpp"
#include "bayesrec/panel.hpp"

namespace bayesrec {

/// Closed-form posterior of the bottom-level means under the noninformative
/// prior: beta | sigma2 ~ N(beta_hat, V sigma2), sigma2 ~ scaled inverse
/// chi-squared with nu = m - m_K degrees of freedom and scale s2.
struct PosteriorParams {
    Eigen::VectorXd beta_hat;    // m_K
    Eigen::MatrixXd v_beta;      // m_K x m_K, symmetric PD
    Eigen::MatrixXd v_factor;    // lower-triangular L with L L^T = v_beta
    double s2 = 0.0;
    int nu = 0;                  // m - m_K
};

/// Independent joint draws of (beta, sigma2), fully determined by the seed.
struct PosteriorDraws {
    Eigen::MatrixXd beta;    // n_draws x m_K
    Eigen::VectorXd sigma2;  // n_draws
    std::uint64_t seed = 0;
    int nu = 0;
    bool degenerate = false;  // s2 == 0: point mass at beta_hat

    int n_draws() const { return static_cast<int>(sigma2.size()); }
};

/// Per-node posterior summary after mapping draws through S.
struct NodeSummary {
    double mean = 0.0;
    std::vector<double> quantiles;
};

struct PosteriorSummary {
    std::vector<double> levels;
    std::vector<NodeSummary> nodes;  // m entries, node order
    NodeSummary sigma2;              // mean is the median when nu <= 2
};

/// GLS estimate and posterior scale:
///   beta_hat = (S' Q^-1 S)^-1 S' Q^-1 yhat
///   V        = (S' Q^-1 S)^-1
///   s2       = (yhat - S beta_hat)' Q^-1 (yhat - S beta_hat) / (m - m_K)
/// The normal-equation matrix is factorized once and reused.
PosteriorParams fit_posterior(const SummingMatrix& s, const CovarianceQ& q,
                              const BaseForecasts& yhat);

/// Composition sampling: sigma2 = nu s2 / X with X ~ chi-squared(nu), then
/// beta = beta_hat + sqrt(sigma2) L z. Draws are independent; each draw has
/// its own derived sub-seed, so sharding across workers cannot change the
/// result. s2 == 0 yields a point mass (flagged).
PosteriorDraws sample_posterior(const PosteriorParams& params, int n_draws, std::uint64_t seed,
                                int threads = 1);

/// Maps draws to all m nodes and reports per-node means and empirical
/// quantiles at the requested probability levels.
PosteriorSummary posterior_summary(const PosteriorDraws& draws, const SummingMatrix& s,
                                   const std::vector<double>& levels);

/// Type-7 empirical quantile (linear interpolation) of an unsorted sample.
double empirical_quantile(std::vector<double> values, double p);

}  // namespace bayesrec
