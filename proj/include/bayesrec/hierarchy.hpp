#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace bayesrec {

/// One node of the tree. `level` is 1-based depth (root = 1); `parent` and
/// `children` are indices into HierarchySpec::nodes.
struct NodeRecord {
    std::string id;
    int level = 1;
    std::optional<int> parent;
    std::vector<int> children;

    bool is_leaf() const { return children.empty(); }
};

/// A validated hierarchy. Nodes are stored level-major with children grouped
/// under their parent in declaration order; leaves sort after internal nodes
/// so the bottom block of the summing matrix is always the identity (for
/// uniform-depth trees this is plain level-major order). Immutable once built.
struct HierarchySpec {
    std::vector<NodeRecord> nodes;
    int levels = 1;  // K, max depth
    int m = 0;       // total node count
    int m_k = 0;     // leaf (bottom-level) count

    /// Node index of each leaf, in node order; column j of the summing
    /// matrix corresponds to bottom_index[j].
    std::vector<int> bottom_index;

    int root() const { return 0; }
    const NodeRecord& node(int i) const { return nodes[static_cast<std::size_t>(i)]; }
    int find(const std::string& id) const;  // -1 if absent
};

/// Dense 0/1 aggregation matrix, m rows by m_k columns. Entry (i, j) is 1
/// iff leaf j is a descendant-or-self of node i.
struct SummingMatrix {
    Eigen::MatrixXd entries;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

/// A parent together with its direct children; one per internal node.
struct Subtree {
    int parent = 0;
    int level = 1;  // level of the parent
    std::vector<int> children;
};

/// Builds a validated HierarchySpec from (id, parent id) pairs; parent is
/// empty for the root. Rejects duplicate ids, multiple roots, orphan parent
/// references, and cycles, naming the offending node.
HierarchySpec make_hierarchy(
    const std::vector<std::pair<std::string, std::optional<std::string>>>& node_list);

/// Parses the JSON hierarchy document: {"nodes": [{"id": ..., "parent": ...}]}
/// with parent null for the root.
HierarchySpec parse_hierarchy(const std::string& json_text);

/// Serializes back to the JSON document form, nodes in canonical order.
/// parse(serialize(h)) reproduces the node list exactly.
std::string serialize_hierarchy(const HierarchySpec& h);

SummingMatrix build_summing_matrix(const HierarchySpec& h);

/// S * bottom; the result is aggregate consistent by construction.
Eigen::VectorXd aggregate(const SummingMatrix& s, const Eigen::VectorXd& bottom);

/// One entry per internal node, in node order.
std::vector<Subtree> enumerate_subtrees(const HierarchySpec& h);

}  // namespace bayesrec
