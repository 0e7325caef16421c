#include "bayesrec/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "bayesrec/errors.hpp"

namespace bayesrec {

double accuracy_floor(const Eigen::VectorXd& gamma) {
    std::vector<double> nonzero;
    nonzero.reserve(static_cast<std::size_t>(gamma.size()));
    for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        if (gamma(i) < 0.0) throw ValidationError("negative accuracy (gamma) entry");
        if (gamma(i) > 0.0) nonzero.push_back(gamma(i));
    }
    if (nonzero.empty()) return 1e-8;
    auto mid = nonzero.begin() + static_cast<std::ptrdiff_t>(nonzero.size() / 2);
    std::nth_element(nonzero.begin(), mid, nonzero.end());
    return 1e-8 * *mid;
}

CovarianceQ build_q_diagonal(const AccuracyVector& gamma, double floor) {
    if (floor <= 0.0) floor = accuracy_floor(gamma.gamma);
    CovarianceQ q;
    q.structure_ = CovarianceQ::Structure::Diagonal;
    q.diag_ = gamma.gamma.cwiseMax(floor);
    q.factorize();
    return q;
}

CovarianceQ build_q_block(const AccuracyVector& gamma, const HierarchySpec& h, KeepParity keep,
                          double floor) {
    if (gamma.gamma.size() != h.m)
        throw ValidationError("gamma length " + std::to_string(gamma.gamma.size()) +
                              " does not match node count " + std::to_string(h.m));
    if (h.levels < 2)
        throw ValidationError("block-diagonal Q needs a tree with at least 2 levels");
    if (floor <= 0.0) floor = accuracy_floor(gamma.gamma);

    CovarianceQ q;
    q.structure_ = CovarianceQ::Structure::BlockDiagonal;
    q.diag_ = gamma.gamma.cwiseMax(floor);

    const int want = keep == KeepParity::Even ? 0 : 1;
    for (const Subtree& st : enumerate_subtrees(h)) {
        if (st.level % 2 != want) {
            q.zeroed_levels_.insert(st.level);
            continue;
        }
        double sibling_total = 0.0;
        for (int c : st.children) sibling_total += q.diag_(c);
        for (int c : st.children) {
            CovarianceQ::OffDiagonal e;
            e.parent = st.parent;
            e.child = c;
            e.value = q.diag_(c) / sibling_total * q.diag_(st.parent);
            q.offdiag_.push_back(e);
        }
    }
    q.factorize();
    return q;
}

KeepParity default_keep_parity(const HierarchySpec& h) {
    return (h.levels - 1) % 2 == 0 ? KeepParity::Even : KeepParity::Odd;
}

void CovarianceQ::factorize() {
    in_block_.assign(static_cast<std::size_t>(diag_.size()), 0);
    if (offdiag_.empty()) return;

    // Group kept entries by parent; each group is one block.
    std::vector<std::pair<int, std::vector<int>>> groups;
    for (const auto& e : offdiag_) {
        if (!groups.empty() && groups.back().first == e.parent)
            groups.back().second.push_back(e.child);
        else
            groups.push_back({e.parent, {e.child}});
    }

    for (int attempt = 0; attempt <= 32; ++attempt) {
        blocks_.clear();
        bool ok = true;
        std::size_t entry = 0;
        for (const auto& [parent, children] : groups) {
            Block blk;
            blk.index.push_back(parent);
            blk.index.insert(blk.index.end(), children.begin(), children.end());
            const int n = static_cast<int>(blk.index.size());
            Eigen::MatrixXd dense_block = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) dense_block(i, i) = diag_(blk.index[i]);
            for (std::size_t c = 0; c < children.size(); ++c) {
                const double v = offdiag_[entry + c].value;
                dense_block(0, static_cast<int>(c) + 1) = v;
                dense_block(static_cast<int>(c) + 1, 0) = v;
            }
            entry += children.size();
            blk.llt.compute(dense_block);
            if (blk.llt.info() != Eigen::Success) {
                ok = false;
                break;
            }
            blocks_.push_back(std::move(blk));
        }
        if (ok) {
            for (const auto& blk : blocks_)
                for (int i : blk.index) in_block_[static_cast<std::size_t>(i)] = 1;
            return;
        }
        if (attempt == 32)
            throw NumericalError(
                "covariance Q is not positive definite even after shrinking the "
                "off-diagonals by 2^-32");
        for (auto& e : offdiag_) e.value *= 0.5;
        shrink_ *= 0.5;
    }
}

Eigen::MatrixXd CovarianceQ::solve(const Eigen::MatrixXd& b) const {
    if (b.rows() != diag_.size())
        throw ValidationError("solve: right-hand side has " + std::to_string(b.rows()) +
                              " rows, expected " + std::to_string(diag_.size()));
    Eigen::MatrixXd x(b.rows(), b.cols());
    for (Eigen::Index i = 0; i < diag_.size(); ++i)
        if (!in_block_[static_cast<std::size_t>(i)]) x.row(i) = b.row(i) / diag_(i);
    for (const auto& blk : blocks_) {
        const int n = static_cast<int>(blk.index.size());
        Eigen::MatrixXd rhs(n, b.cols());
        for (int i = 0; i < n; ++i) rhs.row(i) = b.row(blk.index[i]);
        Eigen::MatrixXd sol = blk.llt.solve(rhs);
        for (int i = 0; i < n; ++i) x.row(blk.index[i]) = sol.row(i);
    }
    return x;
}

Eigen::VectorXd CovarianceQ::solve(const Eigen::VectorXd& b) const {
    return Eigen::VectorXd(solve(Eigen::MatrixXd(b)));
}

Eigen::MatrixXd CovarianceQ::multiply(const Eigen::MatrixXd& b) const {
    Eigen::MatrixXd out = diag_.asDiagonal() * b;
    for (const auto& e : offdiag_) {
        out.row(e.parent) += e.value * b.row(e.child);
        out.row(e.child) += e.value * b.row(e.parent);
    }
    return out;
}

Eigen::MatrixXd CovarianceQ::dense() const {
    Eigen::MatrixXd out = diag_.asDiagonal();
    for (const auto& e : offdiag_) {
        out(e.parent, e.child) = e.value;
        out(e.child, e.parent) = e.value;
    }
    return out;
}

}  // namespace bayesrec
