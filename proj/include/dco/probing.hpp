#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dco/oracles.hpp"
#include "dco/prophet.hpp"  // HardnessMode
#include "dco/rational.hpp"
#include "dco/stats.hpp"

namespace dco {

// Meta-tree of blocks: layer ell holds arity[ell-1]-ary blocks of depth
// depth[ell-1] (the paper's r_ell, which also sets element values 1/r_ell).
// Defaults: arity L^2, depth L^{2 ell}, activation 2/L^2.
struct ProbingParams {
    int L = 2;
    long long p = 10'000;
    HardnessMode mode = HardnessMode::kDesk;
    std::vector<long long> arity;
    std::vector<long long> depth;  // r_ell
    Rat activation = Rat(0);
    long long node_cap = 2'000'000;  // desk materialization budget
    // Test hook: clone block b2 := b1 (vector and edge draws) at `layer`.
    std::optional<std::array<long long, 3>> clone_blocks;

    static ProbingParams make(int L, long long p, HardnessMode mode = HardnessMode::kDesk,
                              std::vector<long long> arity_override = {},
                              std::vector<long long> depth_override = {},
                              Rat activation_override = Rat(-1));

    long long r_of(int ell) const { return depth[static_cast<size_t>(ell - 1)]; }
    long long arity_of(int ell) const { return arity[static_cast<size_t>(ell - 1)]; }
    long long d_of(int ell) const;
    long long d_below_of(int ell) const;
    void validate() const;
};

// Element behind an edge: universes are disjoint across (layer, height).
struct ProbingElement {
    int layer = 0;
    long long height = 0;  // 1-based inside the block
    long long a = 0;       // block-vector coordinate at this height
    long long b = 0;       // per-edge draw x_e
    bool operator==(const ProbingElement&) const = default;
};

// Materialized concatenated tree (desk mode). Edges are identified with their
// child node; node 0 is the root.
struct ProbingTree {
    struct Node {
        long long parent = -1;
        long long first_child = -1;
        int child_count = 0;
        int layer = 0;        // of the incoming edge (0 for the root)
        long long height = 0; // of the incoming edge within its block
        long long block = -1; // block of the incoming edge
        long long x = 0;      // second coordinate of the incoming edge
    };
    std::vector<Node> nodes;
    std::vector<std::vector<long long>> block_vectors;  // block id -> coords
    std::vector<int> block_layer;
    std::vector<long long> block_node_begin;  // contiguous per-block node ranges
    std::vector<long long> block_node_count;
    std::vector<std::vector<long long>> blocks_by_layer;  // layer -> block ids

    long long node_count() const { return static_cast<long long>(nodes.size()); }
    std::vector<long long> leaves;  // cached leaf node ids
};

struct ProbingInstance {
    ProbingParams params;
    uint64_t seed = 0;
    bool materialized = false;
    std::shared_ptr<const ProbingTree> tree;  // desk only

    long long unit_den = 1;
    std::vector<long long> layer_units;

    // Lazy accessors (both modes). An edge address is the child-index path
    // from the concatenated-tree root.
    ProbingElement element_of_edge(const std::vector<long long>& address) const;
    ProbingElement element_of_node(long long node) const;  // desk
    long long units_of_layer(int ell) const { return layer_units[static_cast<size_t>(ell - 1)]; }
};

ProbingInstance gen_probing_instance(const ProbingParams& params, uint64_t seed);

// Bernoulli activations keyed by element identity.
struct ProbingRealization {
    uint64_t seed = 0;
    Rat activation = Rat(0);
    bool active(const ProbingElement& e) const;
};

ProbingRealization sample_probing_realization(const ProbingInstance& inst, uint64_t seed);

// Outer-feasible probe shapes: a root-leaf spine plus all edges incident to
// its nodes. Identified by the spine's child-index address.
struct Caterpillar {
    std::vector<long long> spine;  // child indices, root to leaf
};

Caterpillar random_caterpillar(const ProbingInstance& inst, uint64_t seed);
long long caterpillar_leaf(const ProbingInstance& inst, const Caterpillar& cat);  // desk

struct ProbingIntersections {
    int layer = 0;
    long long d = 0;
    long long d_below = 0;
    long long cross_pairs = 0;
    long long same_pairs = 0;
    long long cross_max = 0;  // heights sharing an element, path vs caterpillar, blocks differ
    long long same_max = 0;   // shared elements beyond the common prefix, same block
    long long cross_violations = 0;
    long long same_violations = 0;
    double cross_bound = 0.0;  // (r_L^3/p)^{d_below+1}
    double same_bound = 0.0;   // (r_L^4/p)^{d+1}
};

struct ProbingIntersectionReport {
    std::vector<ProbingIntersections> layers;
    bool any_violation() const;
};

ProbingIntersectionReport verify_probing_code(const ProbingInstance& inst, long pair_budget,
                                              uint64_t seed);

// Adaptive greedy walk: probe all child edges of the current node, follow the
// first active one (first edge if none). Value counts active spine elements.
struct ProbeStep {
    int layer = 0;
    long long height = 0;
    int arity = 0;
    int active_children = 0;
};

struct ProbeTranscript {
    std::vector<ProbeStep> steps;
    std::vector<long long> spine;        // chosen child indices
    long long value_units = 0;
    long long unit_den = 1;
    long long probes = 0;
    Rat value() const { return Rat(value_units, unit_den); }
};

ProbeTranscript run_adaptive_greedy(const ProbingInstance& inst, uint64_t realization_seed);

// Monte Carlo estimate of the non-adaptive value of one caterpillar:
// E[best root-leaf path over probed active elements].
struct NonAdaptiveEval {
    MeanCI value;
    bool exact = false;  // full-tree evaluation vs restricted lower bound
};

enum class InnerEval { kAuto, kExactTree, kRestricted };

NonAdaptiveEval eval_nonadaptive(const ProbingInstance& inst, const Caterpillar& cat, long trials,
                                 uint64_t seed, InnerEval mode = InnerEval::kAuto,
                                 int alt_paths = 8);

struct ProbingGapStats {
    MeanCI adaptive;            // adaptive greedy
    MeanCI best_nonadaptive;    // best sampled caterpillar
    size_t best_caterpillar = 0;
    std::vector<MeanCI> caterpillar_values;
    RatioCI gap;
    bool nonadaptive_lower_bound = true;  // sampled caterpillars + restricted evaluator
    long trials = 0;
};

ProbingGapStats estimate_adaptivity_gap(const ProbingParams& params, long trials,
                                        long caterpillar_samples, uint64_t seed, int threads = 1);

// Adapter to the exact probing oracles: every edge becomes one element;
// outer sets are caterpillars, inner sets are root-leaf paths. Requires all
// edge elements distinct and at most 8 edges.
TinyProbingInstance to_tiny_probing(const ProbingInstance& inst, const TinyInstanceCap& cap = {});

// Exact expectation of the adaptive greedy walk by outcome enumeration
// (tiny desk instances).
Rat exact_greedy_value(const ProbingInstance& inst, const TinyInstanceCap& cap = {});

}  // namespace dco
