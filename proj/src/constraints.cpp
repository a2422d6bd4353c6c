#include "dco/constraints.hpp"

#include <algorithm>
#include <string>

#include "dco/errors.hpp"

namespace dco {

MaximalFamily MaximalFamily::antichain_reduced() const {
    MaximalFamily out;
    for (size_t i = 0; i < sets.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < sets.size() && !dominated; ++j) {
            if (i == j) continue;
            if (sets[i].is_subset_of(sets[j]) && (sets[i] != sets[j] || j < i)) dominated = true;
        }
        if (!dominated) out.sets.push_back(sets[i]);
    }
    return out;
}

bool MaximalFamily::is_antichain() const {
    for (size_t i = 0; i < sets.size(); ++i)
        for (size_t j = 0; j < sets.size(); ++j)
            if (i != j && sets[i].is_subset_of(sets[j])) return false;
    return true;
}

RootedTree RootedTree::from_parents(std::vector<int> parent) {
    if (parent.empty() || parent[0] != -1) throw InputError("node 0 must be the root");
    RootedTree t;
    t.parent = std::move(parent);
    int n = t.node_count();
    t.depth.assign(static_cast<size_t>(n), 0);
    t.children.assign(static_cast<size_t>(n), {});
    for (int v = 1; v < n; ++v) {
        int u = t.parent[static_cast<size_t>(v)];
        if (u < 0 || u >= v) throw InputError("parents must precede children in node order");
        t.depth[static_cast<size_t>(v)] = t.depth[static_cast<size_t>(u)] + 1;
        t.children[static_cast<size_t>(u)].push_back(v);
    }
    return t;
}

RootedTree RootedTree::complete(int arity, int depth) {
    if (arity < 1 || depth < 0) throw InputError("bad complete-tree shape");
    std::vector<int> parent{-1};
    std::vector<int> frontier{0};
    for (int d = 0; d < depth; ++d) {
        std::vector<int> next;
        for (int u : frontier) {
            for (int c = 0; c < arity; ++c) {
                next.push_back(static_cast<int>(parent.size()));
                parent.push_back(u);
            }
        }
        frontier = std::move(next);
    }
    return from_parents(std::move(parent));
}

std::vector<int> RootedTree::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < node_count(); ++v)
        if (children[static_cast<size_t>(v)].empty()) out.push_back(v);
    return out;
}

ElemSet RootedTree::path_edges(int node) const {
    ElemSet s(static_cast<size_t>(element_count()));
    for (int v = node; v != 0; v = parent[static_cast<size_t>(v)])
        s.set(static_cast<size_t>(element_of_node(v)));
    return s;
}

FeasibilityOracle FeasibilityOracle::explicit_family(int n, MaximalFamily family) {
    for (const auto& m : family.sets)
        if (static_cast<int>(m.size()) != n) throw InputError("family set size does not match n");
    FeasibilityOracle o;
    o.kind = OracleKind::kExplicit;
    o.n = n;
    o.family = std::move(family);
    return o;
}

FeasibilityOracle FeasibilityOracle::tree_path(std::shared_ptr<const RootedTree> tree) {
    FeasibilityOracle o;
    o.kind = OracleKind::kTreePath;
    o.n = tree->element_count();
    o.tree = std::move(tree);
    return o;
}

FeasibilityOracle FeasibilityOracle::caterpillar(std::shared_ptr<const RootedTree> tree) {
    FeasibilityOracle o;
    o.kind = OracleKind::kCaterpillar;
    o.n = tree->element_count();
    o.tree = std::move(tree);
    return o;
}

namespace {

// Edges lie on one root-leaf path iff they are pairwise ancestor-related,
// i.e. all are on the root path of the deepest one.
bool on_one_path(const RootedTree& t, const std::vector<int>& nodes) {
    if (nodes.size() <= 1) return true;
    int deepest = nodes[0];
    for (int v : nodes)
        if (t.depth[static_cast<size_t>(v)] > t.depth[static_cast<size_t>(deepest)]) deepest = v;
    ElemSet path = t.path_edges(deepest);
    for (int v : nodes)
        if (v != 0 && !path.test(static_cast<size_t>(t.element_of_node(v)))) return false;
    return true;
}

}  // namespace

bool is_feasible(const FeasibilityOracle& o, const ElemSet& s) {
    if (static_cast<int>(s.size()) != o.n) throw InputError("set size does not match oracle ground set");
    if (s.none()) return true;
    switch (o.kind) {
        case OracleKind::kExplicit: {
            for (const auto& m : o.family.sets)
                if (s.is_subset_of(m)) return true;
            return false;
        }
        case OracleKind::kTreePath: {
            std::vector<int> nodes;
            for (size_t e = s.find_first(); e != ElemSet::npos; e = s.find_next(e))
                nodes.push_back(o.tree->edge_node(static_cast<int>(e)));
            return on_one_path(*o.tree, nodes);
        }
        case OracleKind::kCaterpillar: {
            // Feasible iff the parent endpoints of all edges share one
            // root-leaf path (the spine can always be extended to a leaf).
            std::vector<int> parents;
            for (size_t e = s.find_first(); e != ElemSet::npos; e = s.find_next(e))
                parents.push_back(o.tree->parent[static_cast<size_t>(o.tree->edge_node(static_cast<int>(e)))]);
            return on_one_path(*o.tree, parents);
        }
    }
    return false;
}

MaximalFamily maximal_sets(const FeasibilityOracle& o, long cap) {
    switch (o.kind) {
        case OracleKind::kExplicit:
            return o.family.antichain_reduced();
        case OracleKind::kTreePath: {
            auto ls = o.tree->leaves();
            if (static_cast<long>(ls.size()) > cap)
                throw CapacityError("tree-path enumeration exceeds cap of " + std::to_string(cap) + " sets");
            MaximalFamily fam;
            fam.sets.reserve(ls.size());
            for (int leaf : ls) fam.sets.push_back(o.tree->path_edges(leaf));
            return fam;
        }
        case OracleKind::kCaterpillar: {
            auto ls = o.tree->leaves();
            if (static_cast<long>(ls.size()) > cap)
                throw CapacityError("caterpillar enumeration exceeds cap of " + std::to_string(cap) + " sets");
            MaximalFamily fam;
            fam.sets.reserve(ls.size());
            for (int leaf : ls) {
                ElemSet s(static_cast<size_t>(o.n));
                for (int v = leaf; v != -1; v = o.tree->parent[static_cast<size_t>(v)]) {
                    if (v != 0) s.set(static_cast<size_t>(o.tree->element_of_node(v)));
                    for (int c : o.tree->children[static_cast<size_t>(v)])
                        s.set(static_cast<size_t>(o.tree->element_of_node(c)));
                }
                fam.sets.push_back(std::move(s));
            }
            return fam.antichain_reduced();
        }
    }
    throw InputError("unknown oracle kind");
}

}  // namespace dco
