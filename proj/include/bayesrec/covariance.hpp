#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <set>
#include <vector>

#include "bayesrec/hierarchy.hpp"
#include "bayesrec/panel.hpp"

namespace bayesrec {

enum class KeepParity { Even, Odd };

/// Known covariance shape of the base-forecast deviations, built from holdout
/// accuracies. Either diagonal or block diagonal, where each block couples a
/// parent with its direct children; subtree levels of the non-kept parity are
/// zeroed so blocks never overlap. Immutable and thread-safe once built.
class CovarianceQ {
public:
    enum class Structure { Diagonal, BlockDiagonal };

    struct OffDiagonal {
        int parent = 0;
        int child = 0;
        double value = 0.0;
    };

    Structure structure() const { return structure_; }
    const Eigen::VectorXd& diagonal() const { return diag_; }
    const std::vector<OffDiagonal>& off_diagonal() const { return offdiag_; }
    const std::set<int>& zeroed_levels() const { return zeroed_levels_; }

    /// 1.0 when the zeroing rule alone gave positive definiteness; < 1 when
    /// the off-diagonals had to be shrunk to repair the factorization.
    double shrink_factor() const { return shrink_; }

    int dim() const { return static_cast<int>(diag_.size()); }

    /// Q^{-1} B using the structure; never forms a dense inverse.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

    /// Q B, for residual checks and tests.
    Eigen::MatrixXd multiply(const Eigen::MatrixXd& b) const;

    /// Dense materialization (debug dumps and oracles).
    Eigen::MatrixXd dense() const;

private:
    friend CovarianceQ build_q_diagonal(const AccuracyVector&, double);
    friend CovarianceQ build_q_block(const AccuracyVector&, const HierarchySpec&, KeepParity,
                                     double);

    struct Block {
        std::vector<int> index;  // parent first, then children
        Eigen::LLT<Eigen::MatrixXd> llt;
    };

    void factorize();  // builds blocks_, shrinking off-diagonals if needed

    Structure structure_ = Structure::Diagonal;
    Eigen::VectorXd diag_;
    std::vector<OffDiagonal> offdiag_;
    std::set<int> zeroed_levels_;
    double shrink_ = 1.0;
    std::vector<Block> blocks_;
    std::vector<char> in_block_;
};

/// Accuracy floor: 1e-8 times the median nonzero gamma (1e-8 if all zero).
double accuracy_floor(const Eigen::VectorXd& gamma);

/// Diagonal Q with entries max(gamma_i, floor).
CovarianceQ build_q_diagonal(const AccuracyVector& gamma, double floor = -1.0);

/// Block-diagonal Q: diagonal as above; in every subtree whose parent level
/// has the kept parity, the (parent, child) entry is the child's share of the
/// sibling accuracy total times the parent accuracy. Other subtrees are
/// zeroed. Verifies positive definiteness, halving the off-diagonals (at most
/// 32 times) if the factorization fails.
CovarianceQ build_q_block(const AccuracyVector& gamma, const HierarchySpec& h, KeepParity keep,
                          double floor = -1.0);

/// Parity that keeps the deepest subtrees (parents at level K-1).
KeepParity default_keep_parity(const HierarchySpec& h);

inline Eigen::MatrixXd solve_q(const CovarianceQ& q, const Eigen::MatrixXd& b) {
    return q.solve(b);
}

}  // namespace bayesrec
