#pragma once

#include <memory>
#include <vector>

#include "dco/sets.hpp"

namespace dco {

// Antichain of maximal feasible sets; S is feasible iff S is contained in
// some member.
struct MaximalFamily {
    std::vector<ElemSet> sets;

    // Drop members contained in another member (and duplicates).
    MaximalFamily antichain_reduced() const;
    bool is_antichain() const;
};

// Rooted tree whose EDGES are the ground-set elements: edge e corresponds to
// the edge entering node e+1 (node 0 is the root).
struct RootedTree {
    std::vector<int> parent;                 // parent[0] == -1
    std::vector<int> depth;                  // depth[0] == 0
    std::vector<std::vector<int>> children;  // by node id

    int node_count() const { return static_cast<int>(parent.size()); }
    int element_count() const { return node_count() - 1; }
    int edge_node(int element) const { return element + 1; }
    int element_of_node(int node) const { return node - 1; }

    static RootedTree from_parents(std::vector<int> parent);
    // Complete tree with `arity` children per node down to `depth` levels.
    static RootedTree complete(int arity, int depth);

    std::vector<int> leaves() const;
    // Edge elements on the root->node path, node itself included.
    ElemSet path_edges(int node) const;
};

enum class OracleKind { kExplicit, kTreePath, kCaterpillar };

// Downward-closed feasibility oracle. Tree kinds answer queries by walking
// the tree; the hardness instances' trees are too large to enumerate.
struct FeasibilityOracle {
    OracleKind kind = OracleKind::kExplicit;
    int n = 0;
    MaximalFamily family;                    // kExplicit
    std::shared_ptr<const RootedTree> tree;  // tree kinds

    static FeasibilityOracle explicit_family(int n, MaximalFamily family);
    static FeasibilityOracle tree_path(std::shared_ptr<const RootedTree> tree);
    static FeasibilityOracle caterpillar(std::shared_ptr<const RootedTree> tree);
};

bool is_feasible(const FeasibilityOracle& o, const ElemSet& s);

inline constexpr long kDefaultEnumerationCap = 1'000'000;

// Antichain of maximal feasible sets; tree kinds enumerate root-leaf paths
// (resp. caterpillars) and fail with a capacity error beyond `cap`.
MaximalFamily maximal_sets(const FeasibilityOracle& o, long cap = kDefaultEnumerationCap);

}  // namespace dco
