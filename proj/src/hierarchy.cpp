#include "bayesrec/hierarchy.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "bayesrec/errors.hpp"

namespace bayesrec {

namespace {

using RawNodes = std::vector<std::pair<std::string, std::optional<std::string>>>;

}  // namespace

int HierarchySpec::find(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return static_cast<int>(i);
    return -1;
}

HierarchySpec make_hierarchy(const RawNodes& node_list) {
    if (node_list.empty()) throw ValidationError("hierarchy has no nodes");

    std::unordered_map<std::string, int> by_id;
    for (std::size_t i = 0; i < node_list.size(); ++i) {
        const auto& id = node_list[i].first;
        if (id.empty()) throw ValidationError("hierarchy node with empty id");
        if (!by_id.emplace(id, static_cast<int>(i)).second)
            throw ValidationError("duplicate node id '" + id + "'");
    }

    int root = -1;
    std::vector<int> parent_of(node_list.size(), -1);
    for (std::size_t i = 0; i < node_list.size(); ++i) {
        const auto& [id, parent_id] = node_list[i];
        if (!parent_id) {
            if (root >= 0)
                throw ValidationError("multiple roots: '" + node_list[root].first + "' and '" +
                                      id + "'");
            root = static_cast<int>(i);
        } else {
            auto it = by_id.find(*parent_id);
            if (it == by_id.end())
                throw ValidationError("node '" + id + "' references unknown parent '" +
                                      *parent_id + "'");
            if (it->second == static_cast<int>(i))
                throw ValidationError("node '" + id + "' is its own parent");
            parent_of[i] = it->second;
        }
    }
    if (root < 0) throw ValidationError("no root node (every node has a parent)");

    // Depth via parent chains; a chain longer than the node count is a cycle.
    std::vector<int> depth(node_list.size(), 0);
    for (std::size_t i = 0; i < node_list.size(); ++i) {
        int steps = 0;
        int cur = static_cast<int>(i);
        while (parent_of[cur] >= 0) {
            cur = parent_of[cur];
            if (++steps > static_cast<int>(node_list.size()))
                throw ValidationError("cycle detected at node '" + node_list[i].first + "'");
        }
        if (cur != root)
            throw ValidationError("cycle detected at node '" + node_list[i].first + "'");
        int d = 1;
        cur = static_cast<int>(i);
        while (parent_of[cur] >= 0) {
            cur = parent_of[cur];
            ++d;
        }
        depth[i] = d;
    }

    std::vector<std::vector<int>> children_of(node_list.size());
    for (std::size_t i = 0; i < node_list.size(); ++i)
        if (parent_of[i] >= 0) children_of[parent_of[i]].push_back(static_cast<int>(i));

    // Canonical order: BFS from the root (level-major, children grouped under
    // parents in declaration order), then internal nodes before leaves so the
    // leaf rows always close the matrix.
    std::vector<int> bfs;
    bfs.reserve(node_list.size());
    bfs.push_back(root);
    for (std::size_t head = 0; head < bfs.size(); ++head)
        for (int c : children_of[bfs[head]]) bfs.push_back(c);
    std::vector<int> order;
    order.reserve(bfs.size());
    for (int i : bfs)
        if (!children_of[i].empty()) order.push_back(i);
    for (int i : bfs)
        if (children_of[i].empty()) order.push_back(i);

    std::vector<int> pos(node_list.size());
    for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = static_cast<int>(p);

    HierarchySpec h;
    h.m = static_cast<int>(node_list.size());
    h.nodes.resize(node_list.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        const int src = order[p];
        NodeRecord rec;
        rec.id = node_list[src].first;
        rec.level = depth[src];
        if (parent_of[src] >= 0) rec.parent = pos[parent_of[src]];
        for (int c : children_of[src]) rec.children.push_back(pos[c]);
        std::sort(rec.children.begin(), rec.children.end());
        h.nodes[p] = std::move(rec);
        h.levels = std::max(h.levels, depth[src]);
    }
    for (int i = 0; i < h.m; ++i)
        if (h.nodes[i].is_leaf()) h.bottom_index.push_back(i);
    h.m_k = static_cast<int>(h.bottom_index.size());
    return h;
}

HierarchySpec parse_hierarchy(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("hierarchy document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        throw ValidationError("hierarchy document must be an object with a 'nodes' array");

    RawNodes raw;
    for (const auto& n : doc["nodes"]) {
        if (!n.is_object() || !n.contains("id") || !n["id"].is_string())
            throw ValidationError("each hierarchy node needs a string 'id'");
        std::optional<std::string> parent;
        if (n.contains("parent") && !n["parent"].is_null()) {
            if (!n["parent"].is_string())
                throw ValidationError("node '" + n["id"].get<std::string>() +
                                      "': 'parent' must be a string or null");
            parent = n["parent"].get<std::string>();
        }
        raw.emplace_back(n["id"].get<std::string>(), parent);
    }
    return make_hierarchy(raw);
}

std::string serialize_hierarchy(const HierarchySpec& h) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : h.nodes) {
        nlohmann::json rec;
        rec["id"] = n.id;
        rec["parent"] = n.parent ? nlohmann::json(h.nodes[*n.parent].id) : nlohmann::json();
        nodes.push_back(std::move(rec));
    }
    nlohmann::json doc;
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

SummingMatrix build_summing_matrix(const HierarchySpec& h) {
    SummingMatrix s;
    s.entries = Eigen::MatrixXd::Zero(h.m, h.m_k);
    for (int j = 0; j < h.m_k; ++j) {
        // Walk up from leaf j; every ancestor (and the leaf itself) covers it.
        int cur = h.bottom_index[j];
        s.entries(cur, j) = 1.0;
        while (h.nodes[cur].parent) {
            cur = *h.nodes[cur].parent;
            s.entries(cur, j) = 1.0;
        }
    }
    return s;
}

Eigen::VectorXd aggregate(const SummingMatrix& s, const Eigen::VectorXd& bottom) {
    if (bottom.size() != s.cols())
        throw ValidationError("aggregate: bottom vector has length " +
                              std::to_string(bottom.size()) + ", expected " +
                              std::to_string(s.cols()));
    return s.entries * bottom;
}

std::vector<Subtree> enumerate_subtrees(const HierarchySpec& h) {
    std::vector<Subtree> out;
    for (int i = 0; i < h.m; ++i) {
        if (h.nodes[i].is_leaf()) continue;
        Subtree st;
        st.parent = i;
        st.level = h.nodes[i].level;
        st.children = h.nodes[i].children;
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace bayesrec
