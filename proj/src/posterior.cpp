#include "bayesrec/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bayesrec/errors.hpp"
#include "bayesrec/parallel.hpp"
#include "bayesrec/rng.hpp"

namespace bayesrec {

PosteriorParams fit_posterior(const SummingMatrix& s, const CovarianceQ& q,
                              const BaseForecasts& yhat) {
    const int m = static_cast<int>(s.rows());
    const int m_k = static_cast<int>(s.cols());
    if (q.dim() != m)
        throw ValidationError("Q dimension " + std::to_string(q.dim()) +
                              " does not match node count " + std::to_string(m));
    if (yhat.point.size() != m)
        throw ValidationError("base forecast length does not match node count");
    if (m <= m_k)
        throw ValidationError(
            "hierarchy has no aggregation constraints (m == m_K, nu = 0); "
            "reconciliation is undefined");

    const Eigen::MatrixXd qinv_s = q.solve(s.entries);
    Eigen::MatrixXd normal = s.entries.transpose() * qinv_s;
    normal = 0.5 * (normal + normal.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success)
        throw NumericalError("normal-equation matrix S'Q^-1S is not positive definite");

    PosteriorParams p;
    p.nu = m - m_k;
    p.beta_hat = llt.solve(qinv_s.transpose() * yhat.point);
    p.v_beta = llt.solve(Eigen::MatrixXd::Identity(m_k, m_k));
    p.v_beta = 0.5 * (p.v_beta + p.v_beta.transpose());

    Eigen::LLT<Eigen::MatrixXd> vllt(p.v_beta);
    if (vllt.info() != Eigen::Success)
        throw NumericalError("posterior covariance V is not positive definite");
    p.v_factor = vllt.matrixL();

    const Eigen::VectorXd resid = yhat.point - s.entries * p.beta_hat;
    p.s2 = std::max(0.0, resid.dot(q.solve(resid)) / p.nu);
    return p;
}

PosteriorDraws sample_posterior(const PosteriorParams& params, int n_draws, std::uint64_t seed,
                                int threads) {
    if (n_draws < 1) throw ValidationError("need at least one posterior draw");
    if (params.nu < 1) throw ValidationError("posterior degrees of freedom must be >= 1");
    const int m_k = static_cast<int>(params.beta_hat.size());

    PosteriorDraws draws;
    draws.seed = seed;
    draws.nu = params.nu;
    draws.beta.resize(n_draws, m_k);
    draws.sigma2.resize(n_draws);

    if (params.s2 == 0.0) {
        draws.degenerate = true;
        draws.sigma2.setZero();
        draws.beta = params.beta_hat.transpose().replicate(n_draws, 1);
        return draws;
    }

    parallel_for(static_cast<std::size_t>(n_draws), threads, [&](std::size_t d) {
        auto rng = engine_for(seed, d);
        std::chi_squared_distribution<double> chi2(params.nu);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double x = chi2(rng);
        const double sigma2 = params.nu * params.s2 / x;
        Eigen::VectorXd z(m_k);
        for (int j = 0; j < m_k; ++j) z(j) = normal(rng);
        draws.sigma2(static_cast<Eigen::Index>(d)) = sigma2;
        draws.beta.row(static_cast<Eigen::Index>(d)) =
            (params.beta_hat + std::sqrt(sigma2) * (params.v_factor * z)).transpose();
    });
    return draws;
}

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw ValidationError("quantile of an empty sample");
    p = std::clamp(p, 0.0, 1.0);
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

PosteriorSummary posterior_summary(const PosteriorDraws& draws, const SummingMatrix& s,
                                   const std::vector<double>& levels) {
    if (levels.empty()) throw ValidationError("no quantile levels requested");
    if (draws.n_draws() < 100)
        throw ValidationError("posterior summary needs at least 100 draws for quantiles");

    PosteriorSummary out;
    out.levels = levels;
    const int m = static_cast<int>(s.rows());
    out.nodes.resize(static_cast<std::size_t>(m));

    // n_draws x m matrix of node-level draws.
    Eigen::MatrixXd mapped = draws.beta * s.entries.transpose();
    std::vector<double> column(static_cast<std::size_t>(draws.n_draws()));
    for (int i = 0; i < m; ++i) {
        for (int d = 0; d < draws.n_draws(); ++d) column[static_cast<std::size_t>(d)] = mapped(d, i);
        NodeSummary& ns = out.nodes[static_cast<std::size_t>(i)];
        ns.mean = mapped.col(i).mean();
        for (double p : levels) ns.quantiles.push_back(empirical_quantile(column, p));
    }

    std::vector<double> sig(draws.sigma2.data(), draws.sigma2.data() + draws.n_draws());
    for (double p : levels) out.sigma2.quantiles.push_back(empirical_quantile(sig, p));
    // The scaled inverse chi-squared mean only exists for nu > 2; report the
    // median as the central value otherwise.
    out.sigma2.mean =
        draws.nu > 2 ? draws.sigma2.mean() : empirical_quantile(sig, 0.5);
    return out;
}

}  // namespace bayesrec
