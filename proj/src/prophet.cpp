#include "dco/prophet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "dco/errors.hpp"
#include "dco/parallel.hpp"
#include "dco/rng.hpp"

namespace dco {

namespace {

long long checked_pow(long long base, long long exp, const char* what) {
    unsigned __int128 acc = 1;
    for (long long i = 0; i < exp; ++i) {
        acc *= static_cast<unsigned __int128>(base);
        if (acc > (static_cast<unsigned __int128>(1) << 62))
            throw InputError(std::string(what) + " overflows 64 bits");
    }
    return static_cast<long long>(acc);
}

}  // namespace

ProphetParams ProphetParams::make(int L, long long p, HardnessMode mode,
                                  std::vector<long long> r_override,
                                  std::vector<long long> branching_override,
                                  Rat activation_override) {
    ProphetParams params;
    params.L = L;
    params.p = p;
    params.mode = mode;
    if (L < 1) throw InputError("L must be at least 1");
    if (r_override.empty()) {
        for (int ell = 1; ell <= L; ++ell)
            params.r.push_back(checked_pow(L, 2 * ell, "r_ell = L^{2 ell}"));
    } else {
        params.r = std::move(r_override);
    }
    if (!branching_override.empty()) {
        params.branching = std::move(branching_override);
    } else if (mode == HardnessMode::kDesk) {
        params.branching.assign(static_cast<size_t>(L), 4);
    } else {
        for (int ell = 1; ell <= L; ++ell) params.branching.push_back(params.paper_branching(ell));
    }
    if (activation_override >= Rat(0))
        params.activation = activation_override;
    else
        params.activation = L >= 2 ? Rat(2, static_cast<long long>(L) * L) : Rat(1);
    params.validate();
    return params;
}

long long ProphetParams::d_of(int ell) const { return std::max<long long>(1, r_of(ell) / L); }

long long ProphetParams::d_below_of(int ell) const {
    return std::max<long long>(1, r_of(ell) / (static_cast<long long>(L) * L));
}

long long ProphetParams::paper_branching(int ell) const {
    return checked_pow(r_of(L), d_of(ell), "paper branching r_L^{d_ell}");
}

void ProphetParams::validate() const {
    if (L < 1) throw InputError("L must be at least 1");
    if (p < 2) throw InputError("alphabet size p must be at least 2");
    if (static_cast<int>(r.size()) != L) throw InputError("r must have one entry per layer");
    if (static_cast<int>(branching.size()) != L) throw InputError("branching must have one entry per layer");
    for (long long v : r)
        if (v < 1) throw InputError("bucket counts must be positive");
    for (long long v : branching)
        if (v < 1) throw InputError("branching must be positive");
    if (activation < Rat(0) || activation > Rat(1)) throw InputError("activation probability out of range");
    if (mode == HardnessMode::kPaperFaithful) {
        unsigned __int128 rl3 = 1;
        for (int i = 0; i < 3; ++i) rl3 *= static_cast<unsigned __int128>(r[static_cast<size_t>(L - 1)]);
        if (rl3 * 8 >= static_cast<unsigned __int128>(p))
            throw InputError("paper-faithful mode requires r_L^3 < p/8");
    }
    if (duplicate_second) {
        auto [layer, i, j] = *duplicate_second;
        if (layer < 1 || layer > L || i < 0 || j < 0 || i >= branching[static_cast<size_t>(layer - 1)] ||
            j >= branching[static_cast<size_t>(layer - 1)] || i == j)
            throw InputError("bad duplicate_second hook");
    }
}

long long ProphetInstance::parent_of(int layer, long long node) const {
    return node / params.branching[static_cast<size_t>(layer - 1)];
}

long long ProphetInstance::second_index_of(int layer, long long node) const {
    return node % params.branching[static_cast<size_t>(layer - 1)];
}

long long ProphetInstance::first_coord(int layer, uint64_t vec, long long bucket) const {
    return first_family[static_cast<size_t>(layer)][vec][static_cast<size_t>(bucket)];
}

long long ProphetInstance::second_coord(int layer, uint64_t vec, long long bucket) const {
    return second_family[static_cast<size_t>(layer)][vec][static_cast<size_t>(bucket)];
}

ProphetElement ProphetInstance::subset_element(int layer, long long node, long long bucket) const {
    ProphetElement e;
    e.layer = layer;
    e.bucket = bucket;
    e.a = first_coord(layer, static_cast<uint64_t>(first_index_of(layer, node)), bucket);
    e.b = second_coord(layer, static_cast<uint64_t>(second_index_of(layer, node)), bucket);
    return e;
}

std::pair<long long, long long> ProphetInstance::leaf_range(int layer, long long node) const {
    long long stride = nodes_per_layer[static_cast<size_t>(params.L)] / nodes_per_layer[static_cast<size_t>(layer)];
    return {node * stride, (node + 1) * stride};
}

ProphetInstance gen_prophet_instance(const ProphetParams& params, uint64_t seed) {
    params.validate();
    ProphetInstance inst;
    inst.params = params;
    inst.seed = seed;

    const int L = params.L;
    inst.nodes_per_layer.assign(static_cast<size_t>(L) + 1, 1);
    unsigned __int128 layer_nodes = 1;
    unsigned __int128 total_nodes = 1;
    for (int ell = 1; ell <= L; ++ell) {
        layer_nodes *= static_cast<unsigned __int128>(params.branching[static_cast<size_t>(ell - 1)]);
        total_nodes += layer_nodes;
        if (total_nodes > static_cast<unsigned __int128>(params.node_cap)) {
            if (params.mode == HardnessMode::kPaperFaithful)
                throw CapacityError(
                    "paper-faithful branching exceeds the node cap; use desk mode with overridden "
                    "branching");
            throw CapacityError("desk tree exceeds node cap of " + std::to_string(params.node_cap));
        }
        inst.nodes_per_layer[static_cast<size_t>(ell)] = static_cast<long long>(layer_nodes);
    }
    inst.materialized = true;

    // Code families: coordinates i.i.d. uniform on [p].
    inst.first_family.assign(static_cast<size_t>(L) + 1, {});
    inst.second_family.assign(static_cast<size_t>(L) + 1, {});
    for (int ell = 1; ell <= L; ++ell) {
        long long r = params.r_of(ell);
        long long nfirst = inst.nodes_per_layer[static_cast<size_t>(ell - 1)];
        long long nsecond = params.branching[static_cast<size_t>(ell - 1)];
        auto& ff = inst.first_family[static_cast<size_t>(ell)];
        ff.resize(static_cast<size_t>(nfirst));
        for (long long f = 0; f < nfirst; ++f) {
            ff[static_cast<size_t>(f)].resize(static_cast<size_t>(r));
            for (long long i = 0; i < r; ++i)
                ff[static_cast<size_t>(f)][static_cast<size_t>(i)] = uniform_prf(
                    seed, tag("prophet-first"), static_cast<uint64_t>(ell), static_cast<uint64_t>(f),
                    static_cast<uint64_t>(i), params.p);
        }
        auto& sf = inst.second_family[static_cast<size_t>(ell)];
        sf.resize(static_cast<size_t>(nsecond));
        for (long long s = 0; s < nsecond; ++s) {
            sf[static_cast<size_t>(s)].resize(static_cast<size_t>(r));
            for (long long i = 0; i < r; ++i)
                sf[static_cast<size_t>(s)][static_cast<size_t>(i)] = uniform_prf(
                    seed, tag("prophet-second"), static_cast<uint64_t>(ell), static_cast<uint64_t>(s),
                    static_cast<uint64_t>(i), params.p);
        }
    }
    if (params.duplicate_second) {
        auto [layer, i, j] = *params.duplicate_second;
        inst.second_family[static_cast<size_t>(layer)][static_cast<size_t>(j)] =
            inst.second_family[static_cast<size_t>(layer)][static_cast<size_t>(i)];
    }

    inst.unit_den = 1;
    for (int ell = 1; ell <= L; ++ell)
        inst.unit_den = std::lcm(inst.unit_den, params.r_of(ell));
    for (int ell = 1; ell <= L; ++ell)
        inst.layer_units.push_back(inst.unit_den / params.r_of(ell));

    // Arrival stream: leaves-to-root, bucket-major, nodes ascending; elements
    // shared between nodes arrive once.
    for (int ell = L; ell >= 1; --ell) {
        long long r = params.r_of(ell);
        long long nodes = inst.nodes_per_layer[static_cast<size_t>(ell)];
        for (long long bucket = 0; bucket < r; ++bucket) {
            std::unordered_map<long long, long long> seen;  // (a * p + b) -> stream index
            seen.reserve(static_cast<size_t>(nodes) * 2);
            for (long long v = 0; v < nodes; ++v) {
                ProphetElement e = inst.subset_element(ell, v, bucket);
                long long key = e.a * params.p + e.b;
                auto [it, fresh] = seen.emplace(key, static_cast<long long>(inst.stream.size()));
                if (fresh) {
                    inst.stream.act_key.push_back(prf(tag("prophet-act"), static_cast<uint64_t>(ell),
                                                      static_cast<uint64_t>(bucket),
                                                      static_cast<uint64_t>(e.a),
                                                      static_cast<uint64_t>(e.b)));
                    inst.stream.layer.push_back(ell);
                    inst.stream.primary_node.push_back(v);
                } else {
                    inst.stream.extra_nodes[it->second].push_back(v);
                }
            }
        }
    }
    return inst;
}

bool ProphetRealization::active(const ProphetElement& e) const {
    return active_key(prf(tag("prophet-act"), static_cast<uint64_t>(e.layer),
                          static_cast<uint64_t>(e.bucket), static_cast<uint64_t>(e.a),
                          static_cast<uint64_t>(e.b)));
}

bool ProphetRealization::active_key(uint64_t act_key) const {
    return bernoulli_prf(prf(seed, act_key), activation);
}

ProphetRealization sample_realization(const ProphetInstance& inst, uint64_t seed) {
    ProphetRealization real;
    real.seed = seed;
    real.activation = inst.params.activation;
    return real;
}

bool IntersectionReport::any_violation() const {
    for (const auto& l : layers)
        if (l.violations_d > 0 || l.violations_d_below > 0) return true;
    return false;
}

namespace {

void record_hist(std::vector<long long>& hist, long long count) {
    if (static_cast<size_t>(count) >= hist.size()) hist.resize(static_cast<size_t>(count) + 1, 0);
    ++hist[static_cast<size_t>(count)];
}

}  // namespace

IntersectionReport verify_prophet_code(const ProphetInstance& inst, long pair_budget, uint64_t seed) {
    if (pair_budget < 1) throw InputError("pair budget must be at least 1");
    const ProphetParams& params = inst.params;
    IntersectionReport report;
    for (int ell = 1; ell <= params.L; ++ell) {
        LayerIntersections stats;
        stats.layer = ell;
        stats.d = params.d_of(ell);
        stats.d_below = params.d_below_of(ell);
        stats.union_bound = std::pow(
            static_cast<double>(params.r_of(params.L)) * static_cast<double>(params.r_of(params.L)) *
                static_cast<double>(params.r_of(params.L)) / static_cast<double>(params.p),
            static_cast<double>(stats.d_below));
        long long r = params.r_of(ell);
        long long parents = inst.nodes_per_layer[static_cast<size_t>(ell - 1)];
        long long siblings = params.branching[static_cast<size_t>(ell - 1)];
        Rng rng(prf(seed, tag("verify-prophet"), static_cast<uint64_t>(ell)));

        // Same parent: shared first vector, so intersections are the
        // coordinate agreements of two distinct second-family vectors.
        if (siblings >= 2) {
            for (long i = 0; i < pair_budget; ++i) {
                long long c1 = static_cast<long long>(rng.below(static_cast<uint64_t>(siblings)));
                long long c2 = static_cast<long long>(rng.below(static_cast<uint64_t>(siblings - 1)));
                if (c2 >= c1) ++c2;
                long long shared = 0;
                for (long long k = 0; k < r; ++k)
                    if (inst.second_coord(ell, static_cast<uint64_t>(c1), k) ==
                        inst.second_coord(ell, static_cast<uint64_t>(c2), k))
                        ++shared;
                ++stats.same_parent_pairs;
                stats.same_parent_max = std::max(stats.same_parent_max, shared);
                record_hist(stats.same_parent_hist, shared);
                if (shared > stats.d) ++stats.violations_d;
            }
        }
        // Different parents: both coordinate pairs must agree.
        if (parents >= 2) {
            for (long i = 0; i < pair_budget; ++i) {
                long long f1 = static_cast<long long>(rng.below(static_cast<uint64_t>(parents)));
                long long f2 = static_cast<long long>(rng.below(static_cast<uint64_t>(parents - 1)));
                if (f2 >= f1) ++f2;
                long long c1 = static_cast<long long>(rng.below(static_cast<uint64_t>(siblings)));
                long long c2 = static_cast<long long>(rng.below(static_cast<uint64_t>(siblings)));
                long long shared = 0;
                for (long long k = 0; k < r; ++k) {
                    if (inst.first_coord(ell, static_cast<uint64_t>(f1), k) !=
                        inst.first_coord(ell, static_cast<uint64_t>(f2), k))
                        continue;
                    if (inst.second_coord(ell, static_cast<uint64_t>(c1), k) ==
                        inst.second_coord(ell, static_cast<uint64_t>(c2), k))
                        ++shared;
                }
                ++stats.diff_parent_pairs;
                stats.diff_parent_max = std::max(stats.diff_parent_max, shared);
                record_hist(stats.diff_parent_hist, shared);
                if (shared > stats.d) ++stats.violations_d;
                if (shared > stats.d_below) ++stats.violations_d_below;
            }
        }
        report.layers.push_back(std::move(stats));
    }
    return report;
}

namespace {

// Per-realization node value sums (active units per node subset), indexed by
// layer offsets.
struct NodeSums {
    std::vector<long long> offset;  // per layer 1..L into `sums`
    std::vector<long long> sums;
};

void node_sums_layout(const ProphetInstance& inst, NodeSums& ns) {
    ns.offset.assign(static_cast<size_t>(inst.params.L) + 1, 0);
    long long total = 0;
    for (int ell = 1; ell <= inst.params.L; ++ell) {
        ns.offset[static_cast<size_t>(ell)] = total;
        total += inst.nodes_per_layer[static_cast<size_t>(ell)];
    }
    ns.sums.assign(static_cast<size_t>(total), 0);
}

void accumulate_entry(const ProphetInstance& inst, NodeSums& ns, size_t i,
                      std::vector<long long>& scratch) {
    int ell = inst.stream.layer[i];
    long long units = inst.layer_units[static_cast<size_t>(ell - 1)];
    long long off = ns.offset[static_cast<size_t>(ell)];
    inst.stream.nodes_of(static_cast<long long>(i), scratch);
    for (long long v : scratch) ns.sums[static_cast<size_t>(off + v)] += units;
}

NodeSums node_sums(const ProphetInstance& inst, const ProphetRealization& real) {
    NodeSums ns;
    node_sums_layout(inst, ns);
    std::vector<long long> scratch;
    for (size_t i = 0; i < inst.stream.size(); ++i) {
        if (!real.active_key(inst.stream.act_key[i])) continue;
        accumulate_entry(inst, ns, i, scratch);
    }
    return ns;
}

long long hindsight_units(const ProphetInstance& inst, const NodeSums& ns) {
    const int L = inst.params.L;
    std::vector<long long> best(
        ns.sums.begin() + ns.offset[static_cast<size_t>(L)],
        ns.sums.begin() + ns.offset[static_cast<size_t>(L)] + inst.nodes_per_layer[static_cast<size_t>(L)]);
    for (int ell = L - 1; ell >= 1; --ell) {
        long long b = inst.params.branching[static_cast<size_t>(ell)];
        std::vector<long long> up(static_cast<size_t>(inst.nodes_per_layer[static_cast<size_t>(ell)]));
        for (long long v = 0; v < inst.nodes_per_layer[static_cast<size_t>(ell)]; ++v) {
            long long m = 0;
            for (long long c = 0; c < b; ++c) m = std::max(m, best[static_cast<size_t>(v * b + c)]);
            up[static_cast<size_t>(v)] = ns.sums[static_cast<size_t>(ns.offset[static_cast<size_t>(ell)] + v)] + m;
        }
        best = std::move(up);
    }
    long long top = 0;
    for (long long v : best) top = std::max(top, v);
    return top;
}

long long descent_units(const ProphetInstance& inst, const NodeSums& ns) {
    const int L = inst.params.L;
    long long node = 0, total = 0;
    for (int ell = 1; ell <= L; ++ell) {
        long long b = inst.params.branching[static_cast<size_t>(ell - 1)];
        long long best_child = node * b, best_val = -1;
        for (long long c = 0; c < b; ++c) {
            long long v = ns.sums[static_cast<size_t>(ns.offset[static_cast<size_t>(ell)] + node * b + c)];
            if (v > best_val) {
                best_val = v;
                best_child = node * b + c;
            }
        }
        total += best_val;
        node = best_child;
    }
    return total;
}

std::vector<std::pair<long long, long long>> intersect_ranges(
    const std::vector<std::pair<long long, long long>>& a,
    const std::vector<std::pair<long long, long long>>& b) {
    std::vector<std::pair<long long, long long>> out;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        long long lo = std::max(a[i].first, b[j].first);
        long long hi = std::min(a[i].second, b[j].second);
        if (lo < hi) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second)
            ++i;
        else
            ++j;
    }
    return out;
}

long long policy_units(const ProphetInstance& inst, const ProphetPolicy& policy,
                       const std::function<bool(size_t)>& is_active) {
    int layer_cap = inst.params.L;
    if (policy.kind == ProphetPolicyKind::kLayerThreshold) layer_cap = policy.param;
    if (policy.kind == ProphetPolicyKind::kSkipSmallLayers) layer_cap = inst.params.L - policy.param;
    std::vector<std::pair<long long, long long>> candidates{
        {0, inst.nodes_per_layer[static_cast<size_t>(inst.params.L)]}};
    long long total = 0;
    std::vector<long long> nodes;
    std::vector<std::pair<long long, long long>> ranges;
    for (size_t i = 0; i < inst.stream.size(); ++i) {
        int ell = inst.stream.layer[i];
        if (ell > layer_cap) continue;
        if (!is_active(i)) continue;
        inst.stream.nodes_of(static_cast<long long>(i), nodes);
        ranges.clear();
        for (long long v : nodes) ranges.push_back(inst.leaf_range(ell, v));
        auto next = intersect_ranges(candidates, ranges);
        if (next.empty()) continue;  // accepting would break feasibility
        candidates = std::move(next);
        total += inst.layer_units[static_cast<size_t>(ell - 1)];
    }
    return total;
}

}  // namespace

Rat hindsight_opt(const ProphetInstance& inst, const ProphetRealization& real) {
    NodeSums ns = node_sums(inst, real);
    return Rat(hindsight_units(inst, ns), inst.unit_den);
}

Rat hindsight_greedy_descent(const ProphetInstance& inst, const ProphetRealization& real) {
    NodeSums ns = node_sums(inst, real);
    return Rat(descent_units(inst, ns), inst.unit_den);
}

std::string ProphetPolicy::name() const {
    switch (kind) {
        case ProphetPolicyKind::kGreedyCommit:
            return "greedy-commit";
        case ProphetPolicyKind::kLayerThreshold:
            return "layer-threshold(" + std::to_string(param) + ")";
        case ProphetPolicyKind::kSkipSmallLayers:
            return "skip-small-layers(" + std::to_string(param) + ")";
    }
    return "?";
}

Rat run_online_policy(const ProphetInstance& inst, const ProphetRealization& real,
                      const ProphetPolicy& policy) {
    long long units =
        policy_units(inst, policy, [&](size_t i) { return real.active_key(inst.stream.act_key[i]); });
    return Rat(units, inst.unit_den);
}

ProphetGapStats estimate_prophet_gap(const ProphetParams& params, long trials, uint64_t seed,
                                     int threads) {
    if (trials <= 0) throw InputError("trials must be positive for gap estimation");
    if (params.mode != HardnessMode::kDesk)
        throw CapacityError("gap estimation requires desk mode");
    ProphetInstance inst = gen_prophet_instance(params, seed);

    std::vector<ProphetPolicy> suite;
    suite.push_back({ProphetPolicyKind::kGreedyCommit, 0});
    for (int t = 1; t < params.L; ++t) suite.push_back({ProphetPolicyKind::kLayerThreshold, t});
    if (params.L >= 2) suite.push_back({ProphetPolicyKind::kSkipSmallLayers, 1});

    std::vector<double> hindsight(static_cast<size_t>(trials));
    std::vector<double> descent(static_cast<size_t>(trials));
    std::vector<std::vector<double>> policy_vals(suite.size(),
                                                 std::vector<double>(static_cast<size_t>(trials)));
    double den = static_cast<double>(inst.unit_den);

    parallel_for(trials, threads, [&](long t) {
        ProphetRealization real = sample_realization(inst, prf(seed, tag("trial"), static_cast<uint64_t>(t)));
        // One activation pass shared by the benchmark and every policy.
        std::vector<char> act(inst.stream.size());
        for (size_t i = 0; i < inst.stream.size(); ++i)
            act[i] = real.active_key(inst.stream.act_key[i]) ? 1 : 0;
        NodeSums ns;
        node_sums_layout(inst, ns);
        std::vector<long long> scratch;
        for (size_t i = 0; i < inst.stream.size(); ++i)
            if (act[i]) accumulate_entry(inst, ns, i, scratch);
        hindsight[static_cast<size_t>(t)] = static_cast<double>(hindsight_units(inst, ns)) / den;
        descent[static_cast<size_t>(t)] = static_cast<double>(descent_units(inst, ns)) / den;
        for (size_t pi = 0; pi < suite.size(); ++pi) {
            long long units = policy_units(inst, suite[pi], [&](size_t i) { return act[i] != 0; });
            policy_vals[pi][static_cast<size_t>(t)] = static_cast<double>(units) / den;
        }
    });

    ProphetGapStats out;
    out.trials = trials;
    out.greedy_descent = mean_ci(descent, 0.95);
    out.online.benchmark = mean_ci(hindsight, 0.95);
    for (size_t pi = 0; pi < suite.size(); ++pi) {
        out.online.policy_names.push_back(suite[pi].name());
        out.online.policy_values.push_back(mean_ci(policy_vals[pi], 0.95));
    }
    out.online.best_policy = 0;
    for (size_t pi = 1; pi < suite.size(); ++pi)
        if (out.online.policy_values[pi].mean > out.online.policy_values[out.online.best_policy].mean)
            out.online.best_policy = pi;
    out.online.gap = ratio_ci(out.online.benchmark, out.online.policy_values[out.online.best_policy]);
    return out;
}

TinyOnlineInstance to_tiny_online(const ProphetInstance& inst, const TinyInstanceCap& cap) {
    TinyOnlineInstance tiny;
    tiny.n = static_cast<int>(inst.stream.size());
    if (tiny.n > cap.max_elements)
        throw CapacityError("prophet instance has " + std::to_string(tiny.n) +
                            " distinct elements, oracle caps at " + std::to_string(cap.max_elements));
    tiny.unit_den = inst.unit_den;
    for (size_t i = 0; i < inst.stream.size(); ++i) {
        tiny.value_units.push_back(inst.layer_units[static_cast<size_t>(inst.stream.layer[i] - 1)]);
        tiny.active_prob.push_back(inst.params.activation);
    }
    long long leaves = inst.nodes_per_layer[static_cast<size_t>(inst.params.L)];
    if (leaves > cap.max_maximal_sets)
        throw CapacityError("prophet instance has too many root-leaf paths for the oracle cap");
    std::vector<long long> nodes;
    for (long long leaf = 0; leaf < leaves; ++leaf) {
        ElemSet m(static_cast<size_t>(tiny.n));
        for (size_t i = 0; i < inst.stream.size(); ++i) {
            inst.stream.nodes_of(static_cast<long long>(i), nodes);
            for (long long v : nodes) {
                auto [lo, hi] = inst.leaf_range(inst.stream.layer[i], v);
                if (leaf >= lo && leaf < hi) {
                    m.set(i);
                    break;
                }
            }
        }
        tiny.maximal.push_back(std::move(m));
    }
    return tiny;
}

namespace {

long long policy_units_mask(const ProphetInstance& inst, const ProphetPolicy& policy, uint32_t mask) {
    return policy_units(inst, policy, [&](size_t i) { return (mask >> i) & 1u; });
}

}  // namespace

Rat exact_prophet_policy_value(const ProphetInstance& inst, const ProphetPolicy& policy,
                               const TinyInstanceCap& cap) {
    TinyOnlineInstance tiny = to_tiny_online(inst, cap);
    return exact_policy_value(
        tiny, [&](uint32_t mask) { return policy_units_mask(inst, policy, mask); }, cap);
}

Rat exact_prophet_hindsight_value(const ProphetInstance& inst, const TinyInstanceCap& cap) {
    TinyOnlineInstance tiny = to_tiny_online(inst, cap);
    return exact_hindsight_value(tiny, cap);
}

}  // namespace dco
