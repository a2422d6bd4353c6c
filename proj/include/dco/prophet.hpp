#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dco/oracles.hpp"
#include "dco/rational.hpp"
#include "dco/stats.hpp"

namespace dco {

enum class HardnessMode { kDesk, kPaperFaithful };

// Layered-forest hardness instance parameters. Layer ell runs 1..L; the root
// sits alone at layer 0. Defaults follow r_ell = L^{2ell}, d_ell = r_ell / L,
// d_below = r_ell / L^2, activation 2/L^2. Desk mode may override the bucket
// counts r and the per-layer branching; paper-faithful mode keeps the paper's
// branching r_L^{d_ell} and is only usable for code verification.
struct ProphetParams {
    int L = 2;
    long long p = 10'000;
    HardnessMode mode = HardnessMode::kDesk;
    std::vector<long long> r;          // 1-based semantics, r[ell-1]
    std::vector<long long> branching;  // children per layer-(ell-1) node (desk)
    Rat activation = Rat(0);
    long long node_cap = 4'000'000;    // desk materialization budget
    // Test hook: duplicate second-family vector j := i at `layer`.
    std::optional<std::array<long long, 3>> duplicate_second;

    static ProphetParams make(int L, long long p, HardnessMode mode = HardnessMode::kDesk,
                              std::vector<long long> r_override = {},
                              std::vector<long long> branching_override = {},
                              Rat activation_override = Rat(-1));

    long long r_of(int ell) const { return r[static_cast<size_t>(ell - 1)]; }
    long long d_of(int ell) const;        // r_ell / L, at least 1
    long long d_below_of(int ell) const;  // r_ell / L^2, at least 1
    // Paper branching r_L^{d_ell}; throws InputError when it overflows int64.
    long long paper_branching(int ell) const;

    void validate() const;
};

// Element of the prophet universe: one of the p^2 choices in a bucket.
struct ProphetElement {
    int layer = 0;
    long long bucket = 0;
    long long a = 0;  // first-family coordinate
    long long b = 0;  // second-family coordinate
    bool operator==(const ProphetElement&) const = default;
};

struct ProphetInstance {
    ProphetParams params;
    uint64_t seed = 0;
    bool materialized = false;

    // nodes_per_layer[ell] for ell in 0..L; desk only beyond validation.
    std::vector<long long> nodes_per_layer;
    // Desk code families, 1-based by layer: first_family[ell] has
    // nodes_per_layer[ell-1] vectors, second_family[ell] has branching[ell-1]
    // vectors, all of length r_ell with coordinates in [p].
    std::vector<std::vector<std::vector<long long>>> first_family;
    std::vector<std::vector<std::vector<long long>>> second_family;

    long long unit_den = 1;                 // lcm of the r_ell
    std::vector<long long> layer_units;     // value of one layer-ell element in units

    long long parent_of(int layer, long long node) const;
    long long first_index_of(int layer, long long node) const { return parent_of(layer, node); }
    long long second_index_of(int layer, long long node) const;
    long long first_coord(int layer, uint64_t vec, long long bucket) const;
    long long second_coord(int layer, uint64_t vec, long long bucket) const;
    ProphetElement subset_element(int layer, long long node, long long bucket) const;
    // Leaf-range [begin, end) of the layer-L descendants of (layer, node).
    std::pair<long long, long long> leaf_range(int layer, long long node) const;

    // Arrival stream (desk): deduplicated elements, leaves-to-root, bucket-major
    // within a layer, node-ascending within a bucket. Flat storage; elements
    // shared by several nodes (rare) keep the extras in a side map.
    struct Stream {
        std::vector<uint64_t> act_key;  // combine with a realization seed
        std::vector<int32_t> layer;
        std::vector<long long> primary_node;
        std::unordered_map<long long, std::vector<long long>> extra_nodes;  // by entry index

        size_t size() const { return act_key.size(); }
        // Containing node ids, ascending.
        void nodes_of(long long index, std::vector<long long>& out) const {
            out.clear();
            out.push_back(primary_node[static_cast<size_t>(index)]);
            auto it = extra_nodes.find(index);
            if (it != extra_nodes.end()) out.insert(out.end(), it->second.begin(), it->second.end());
        }
    };
    Stream stream;
};

ProphetInstance gen_prophet_instance(const ProphetParams& params, uint64_t seed);

// Bernoulli activations evaluated lazily per element identity.
struct ProphetRealization {
    uint64_t seed = 0;
    Rat activation = Rat(0);

    bool active(const ProphetElement& e) const;
    bool active_key(uint64_t act_key) const;
};

ProphetRealization sample_realization(const ProphetInstance& inst, uint64_t seed);

struct LayerIntersections {
    int layer = 0;
    long long d = 0;        // same-parent threshold d_ell
    long long d_below = 0;  // different-parent threshold d_below
    long long same_parent_pairs = 0;
    long long diff_parent_pairs = 0;
    long long same_parent_max = 0;
    long long diff_parent_max = 0;
    std::vector<long long> same_parent_hist;
    std::vector<long long> diff_parent_hist;
    long long violations_d = 0;        // any pair sharing more than d_ell
    long long violations_d_below = 0;  // different-parent pairs above d_below
    double union_bound = 0.0;          // (r_L^3 / p)^{d_below}
};

struct IntersectionReport {
    std::vector<LayerIntersections> layers;
    bool any_violation() const;
};

// Samples same-layer subset pairs and histograms shared-element counts,
// split by same-parent vs different-parent.
IntersectionReport verify_prophet_code(const ProphetInstance& inst, long pair_budget, uint64_t seed);

// Exact hindsight optimum for one realization (desk): bottom-up over the tree.
Rat hindsight_opt(const ProphetInstance& inst, const ProphetRealization& real);

// Offline descent surrogate: from the root, repeatedly move to the child with
// the most active elements. Lower-bounds the hindsight optimum.
Rat hindsight_greedy_descent(const ProphetInstance& inst, const ProphetRealization& real);

enum class ProphetPolicyKind { kGreedyCommit, kLayerThreshold, kSkipSmallLayers };

struct ProphetPolicy {
    ProphetPolicyKind kind = ProphetPolicyKind::kGreedyCommit;
    int param = 0;  // threshold layer / number of skipped leaf layers
    std::string name() const;
};

// Runs one online policy over the arrival stream; selections stay feasible
// (within the union of subsets along some root-leaf path) at every step.
Rat run_online_policy(const ProphetInstance& inst, const ProphetRealization& real,
                      const ProphetPolicy& policy);

struct ProphetGapStats {
    GapStats online;        // per-policy means, hindsight benchmark, gap ratio
    MeanCI greedy_descent;  // offline completeness surrogate
    long trials = 0;
};

// Monte Carlo means and CIs for the hindsight optimum and the policy suite
// (greedy-commit, layer-threshold(1..L), skip-small-layers(1..L-1)).
ProphetGapStats estimate_prophet_gap(const ProphetParams& params, long trials, uint64_t seed,
                                     int threads = 1);

// Adapter to the exact-oracle form; requires few distinct elements.
TinyOnlineInstance to_tiny_online(const ProphetInstance& inst, const TinyInstanceCap& cap = {});

// Exact expectation of an online policy by enumerating all activation
// outcomes (tiny instances only).
Rat exact_prophet_policy_value(const ProphetInstance& inst, const ProphetPolicy& policy,
                               const TinyInstanceCap& cap = {});

// Exact expected hindsight value by outcome enumeration (tiny instances).
Rat exact_prophet_hindsight_value(const ProphetInstance& inst, const TinyInstanceCap& cap = {});

}  // namespace dco
