#include <doctest.h>

#include <cmath>
#include <functional>

#include "dco/errors.hpp"
#include "dco/oracles.hpp"
#include "dco/probing.hpp"
#include "dco/rng.hpp"
#include "dco/stats.hpp"

using namespace dco;

namespace {

// Two layers of depth-1 blocks with arity 2: the 6-edge star-of-stars used
// for exact-gap checks.
ProbingParams six_edge_params() {
    return ProbingParams::make(2, 1000003, HardnessMode::kDesk, {2, 2}, {1, 1});
}

}  // namespace

TEST_CASE("probing parameters follow the layer formulas") {
    ProbingParams p2 = ProbingParams::make(2, 10000, HardnessMode::kDesk, {}, {2, 2});
    CHECK(p2.arity == std::vector<long long>{4, 4});
    CHECK(p2.activation == Rat(1, 2));
    ProbingParams defaults = ProbingParams::make(2, 10000, HardnessMode::kDesk);
    CHECK(defaults.depth == std::vector<long long>{4, 16});
    CHECK(defaults.d_of(2) == 8);
    CHECK(defaults.d_below_of(2) == 4);
    // Block-count bound: (L^2)^{r_1} <= r_L^{d_below(2)}.
    double lhs = std::pow(4.0, 4.0), rhs = std::pow(16.0, 4.0);
    CHECK(lhs == 256.0);
    CHECK(lhs <= rhs);
    // In logs, (L^2)^{r_1+...+r_{ell-1}} <= r_L^{d_below(ell)} at every layer.
    for (int L = 2; L <= 4; ++L) {
        ProbingParams params = ProbingParams::make(L, 2, HardnessMode::kDesk, {}, {});
        double log_l2 = std::log(static_cast<double>(L) * L);
        double log_rl = std::log(static_cast<double>(params.r_of(L)));
        double depth_sum = 0;
        for (int ell = 2; ell <= L; ++ell) {
            depth_sum += static_cast<double>(params.r_of(ell - 1));
            CAPTURE(L);
            CAPTURE(ell);
            CHECK(depth_sum * log_l2 <= static_cast<double>(params.d_below_of(ell)) * log_rl + 1e-9);
        }
    }
    // Paper-faithful margin r_L^4 < p/8.
    CHECK_THROWS_AS(ProbingParams::make(2, 10000, HardnessMode::kPaperFaithful), InputError);
    CHECK_NOTHROW(ProbingParams::make(2, 1000000, HardnessMode::kPaperFaithful));
}

TEST_CASE("desk generation shapes blocks and respects the cap") {
    ProbingParams params = ProbingParams::make(2, 10000, HardnessMode::kDesk, {2, 2}, {2, 2});
    ProbingInstance inst = gen_probing_instance(params, 4);
    REQUIRE(inst.materialized);
    // Layer 1: one block of depth 2 (6 nodes); each of its 4 leaves roots a
    // layer-2 block with 6 more nodes.
    CHECK(inst.tree->blocks_by_layer[1].size() == 1);
    CHECK(inst.tree->blocks_by_layer[2].size() == 4);
    CHECK(inst.tree->node_count() == 1 + 6 + 4 * 6);
    CHECK(inst.tree->leaves.size() == 16);
    CHECK(inst.unit_den == 2);

    ProbingParams over = params;
    over.node_cap = 10;
    CHECK_THROWS_AS(gen_probing_instance(over, 4), CapacityError);
}

TEST_CASE("edge elements: universes, determinism, uniformity") {
    // r_L^4 = 16^4 = 65536 needs p > 524288 in paper-faithful mode.
    ProbingParams params = ProbingParams::make(2, 1000003, HardnessMode::kPaperFaithful);
    ProbingInstance inst = gen_probing_instance(params, 77);
    CHECK(!inst.materialized);

    // Determinism of the lazy map on random addresses.
    ProbingInstance again = gen_probing_instance(params, 77);
    Rng rng(5);
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<long long> address;
        long long steps = 1 + static_cast<long long>(rng.below(20));
        long long consumed = 0;
        for (int ell = 1; ell <= 2 && consumed < steps; ++ell)
            for (long long h = 0; h < params.r_of(ell) && consumed < steps; ++h, ++consumed)
                address.push_back(static_cast<long long>(rng.below(static_cast<uint64_t>(params.arity_of(ell)))));
        ProbingElement e1 = inst.element_of_edge(address);
        ProbingElement e2 = again.element_of_edge(address);
        CHECK(e1 == e2);
    }

    // Different heights never coincide (disjoint universes by identity).
    ProbingElement top = inst.element_of_edge({0});
    ProbingElement deeper = inst.element_of_edge({0, 0});
    CHECK(top.layer == 1);
    CHECK(top.height == 1);
    CHECK(deeper.height == 2);
    CHECK(!(top == deeper));

    CHECK_THROWS_AS(inst.element_of_edge({}), InputError);
    CHECK_THROWS_AS(inst.element_of_edge({99}), InputError);

    // Second coordinate is uniform on [p] (chi-square over a coarse binning).
    ProbingParams up = ProbingParams::make(2, 1000, HardnessMode::kDesk, {2, 2}, {3, 3});
    ProbingInstance dense = gen_probing_instance(up, 31);
    std::vector<uint64_t> counts(10, 0);
    long long draws = 0;
    for (long long v = 1; v < dense.tree->node_count(); ++v) {
        ++draws;
        ++counts[static_cast<size_t>(dense.element_of_node(v).b / 100)];
    }
    // Small sample; just check nothing collapses to a few cells.
    CHECK(draws > 80);
    CHECK(chi_square_uniform_pvalue(counts) > 1e-6);
}

TEST_CASE("lazy second coordinates are uniform at scale") {
    // Wide arity gives plenty of distinct edges to sample.
    ProbingParams params = ProbingParams::make(2, 1000, HardnessMode::kPaperFaithful, {1000, 1000}, {2, 2});
    ProbingInstance inst = gen_probing_instance(params, 99);
    std::vector<uint64_t> counts(1000, 0);
    for (int rep = 0; rep < 100000; ++rep) {
        std::vector<long long> address{rep % 1000, (rep / 1000) % 1000};
        ++counts[static_cast<size_t>(inst.element_of_edge(address).b)];
    }
    CHECK(chi_square_uniform_pvalue(counts) > 0.001);
}

TEST_CASE("verification carves out the common prefix and flags clones") {
    // Single path per block: every sampled pair is the path against its own
    // caterpillar, so everything is common prefix.
    ProbingParams line = ProbingParams::make(1, 10007, HardnessMode::kDesk, {1}, {3});
    ProbingInstance line_inst = gen_probing_instance(line, 6);
    ProbingIntersectionReport self = verify_probing_code(line_inst, 500, 2);
    CHECK(self.layers[0].same_max == 0);
    CHECK(!self.any_violation());

    // Honest small instance: no flags.
    ProbingParams params = ProbingParams::make(2, 10000, HardnessMode::kDesk, {2, 2}, {2, 2});
    ProbingInstance inst = gen_probing_instance(params, 8);
    ProbingIntersectionReport clean = verify_probing_code(inst, 3000, 3);
    CHECK(!clean.any_violation());
    REQUIRE(clean.layers.size() == 2);
    CHECK(clean.layers[1].cross_pairs > 0);
    CHECK(clean.layers[1].same_pairs == 3000);
    CHECK(clean.layers[1].cross_bound > 0.0);
    CHECK(clean.layers[1].same_bound > 0.0);

    // Cloned sibling blocks share whole heights across blocks.
    ProbingParams cloned = params;
    cloned.clone_blocks = std::array<long long, 3>{2, 0, 1};
    ProbingInstance bad = gen_probing_instance(cloned, 8);
    ProbingIntersectionReport flagged = verify_probing_code(bad, 3000, 3);
    CHECK(flagged.any_violation());
    CHECK(flagged.layers[1].cross_violations > 0);
    // Distinct edges may carry the same element: corresponding edges of the
    // cloned blocks agree on (layer, height, vector entry, x).
    long long b1 = bad.tree->blocks_by_layer[2][0], b2 = bad.tree->blocks_by_layer[2][1];
    long long n1 = bad.tree->block_node_begin[static_cast<size_t>(b1)];
    long long n2 = bad.tree->block_node_begin[static_cast<size_t>(b2)];
    CHECK(n1 != n2);
    CHECK(bad.element_of_node(n1) == bad.element_of_node(n2));
}

TEST_CASE("adaptive greedy scores exactly L when everything is active") {
    ProbingParams on = ProbingParams::make(2, 1000003, HardnessMode::kPaperFaithful, {}, {}, Rat(1));
    ProbingInstance inst = gen_probing_instance(on, 11);
    ProbeTranscript tr = run_adaptive_greedy(inst, 5);
    CHECK(tr.value() == Rat(2));
    CHECK(tr.probes > 0);
    CHECK(tr.spine.size() == static_cast<size_t>(on.r_of(1) + on.r_of(2)));
    for (const auto& step : tr.steps) CHECK(step.active_children == step.arity);

    ProbingParams off = ProbingParams::make(2, 1000003, HardnessMode::kPaperFaithful, {}, {}, Rat(0));
    ProbeTranscript tr0 = run_adaptive_greedy(gen_probing_instance(off, 11), 5);
    CHECK(tr0.value() == Rat(0));
    for (const auto& step : tr0.steps) CHECK(step.active_children == 0);
}

TEST_CASE("greedy per-step success tracks the binomial model") {
    ProbingParams params = ProbingParams::make(2, 1000003, HardnessMode::kPaperFaithful);
    ProbingInstance inst = gen_probing_instance(params, 19);
    const int trials = 2000;
    long long success = 0, visits = 0, active = 0, probes = 0;
    for (int t = 0; t < trials; ++t) {
        ProbeTranscript tr = run_adaptive_greedy(inst, prf(3, static_cast<uint64_t>(t)));
        for (const auto& step : tr.steps) {
            ++visits;
            if (step.active_children > 0) ++success;
            active += step.active_children;
            probes += step.arity;
        }
    }
    double q_hat = static_cast<double>(active) / static_cast<double>(probes);
    double model = 1.0 - std::pow(1.0 - q_hat, 4.0);
    double freq = static_cast<double>(success) / static_cast<double>(visits);
    double sigma = std::sqrt(model * (1.0 - model) / static_cast<double>(visits));
    CHECK(std::abs(freq - model) < 5 * sigma + 1e-9);
}

TEST_CASE("non-adaptive evaluation: trivial and exact cases") {
    // Activation 0 scores 0.
    ProbingParams off = ProbingParams::make(2, 10007, HardnessMode::kDesk, {2, 2}, {2, 2}, Rat(0));
    ProbingInstance inst_off = gen_probing_instance(off, 13);
    Caterpillar cat0 = random_caterpillar(inst_off, 4);
    NonAdaptiveEval z = eval_nonadaptive(inst_off, cat0, 50, 1);
    CHECK(z.value.mean == 0.0);

    // Single block, depth 2, arity 2: exact tree evaluation equals exhaustive
    // inner-path enumeration on the same realization.
    ProbingParams single = ProbingParams::make(1, 10007, HardnessMode::kDesk, {2}, {2});
    ProbingInstance inst = gen_probing_instance(single, 21);
    Caterpillar cat = random_caterpillar(inst, 9);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        // eval_nonadaptive with one trial uses the realization (seed, trial 0).
        ProbingRealization real = sample_probing_realization(inst, prf(seed, tag("na-trial"), 0ULL));
        std::vector<long long> probed_nodes;
        long long node = 0;
        for (long long c : cat.spine) {
            const auto& nd = inst.tree->nodes[static_cast<size_t>(node)];
            for (int k = 0; k < nd.child_count; ++k) probed_nodes.push_back(nd.first_child + k);
            node = nd.first_child + c;
        }
        long long best = 0;
        for (long long leaf : inst.tree->leaves) {
            long long total = 0;
            for (long long v = leaf; v != 0; v = inst.tree->nodes[static_cast<size_t>(v)].parent) {
                ProbingElement e = inst.element_of_node(v);
                bool probed = false;
                for (long long pv : probed_nodes)
                    if (inst.element_of_node(pv) == e) {
                        probed = true;
                        break;
                    }
                if (probed && real.active(e)) total += inst.units_of_layer(e.layer);
            }
            best = std::max(best, total);
        }
        NonAdaptiveEval got = eval_nonadaptive(inst, cat, 1, seed, InnerEval::kExactTree);
        CAPTURE(seed);
        CHECK(got.exact);
        CHECK(got.value.mean == doctest::Approx(static_cast<double>(best) / static_cast<double>(inst.unit_den)));
    }

    // Restricted evaluation lower-bounds the exact one.
    ProbingParams two = ProbingParams::make(2, 10007, HardnessMode::kDesk, {2, 2}, {2, 2});
    ProbingInstance inst2 = gen_probing_instance(two, 33);
    Caterpillar cat2 = random_caterpillar(inst2, 3);
    NonAdaptiveEval exact = eval_nonadaptive(inst2, cat2, 200, 6, InnerEval::kExactTree);
    NonAdaptiveEval restricted = eval_nonadaptive(inst2, cat2, 200, 6, InnerEval::kRestricted, 4);
    CHECK(restricted.value.mean <= exact.value.mean + 1e-12);
    CHECK(!restricted.exact);

    // All-active run scores exactly L on any caterpillar.
    ProbingParams full = ProbingParams::make(2, 10007, HardnessMode::kDesk, {2, 2}, {2, 2}, Rat(1));
    ProbingInstance inst_full = gen_probing_instance(full, 2);
    NonAdaptiveEval top = eval_nonadaptive(inst_full, random_caterpillar(inst_full, 8), 10, 3);
    CHECK(top.value.mean == doctest::Approx(2.0));

    CHECK_THROWS_AS(eval_nonadaptive(inst2, Caterpillar{{0}}, 10, 1), InputError);
    CHECK_THROWS_AS(eval_nonadaptive(inst2, cat2, 0, 1), InputError);
}

TEST_CASE("spine contribution matches activation linearity") {
    ProbingParams params = ProbingParams::make(2, 1000003, HardnessMode::kDesk, {2, 2}, {2, 3});
    ProbingInstance inst = gen_probing_instance(params, 44);
    Caterpillar cat = random_caterpillar(inst, 10);
    // Spine elements along the caterpillar.
    std::vector<ProbingElement> spine;
    long long node = 0;
    for (long long c : cat.spine) {
        node = inst.tree->nodes[static_cast<size_t>(node)].first_child + c;
        spine.push_back(inst.element_of_node(node));
    }
    const int trials = 4000;
    double total = 0;
    for (int t = 0; t < trials; ++t) {
        ProbingRealization real = sample_probing_realization(inst, prf(5, static_cast<uint64_t>(t)));
        long long units = 0;
        for (const auto& e : spine)
            if (real.active(e)) units += inst.units_of_layer(e.layer);
        total += static_cast<double>(units) / static_cast<double>(inst.unit_den);
    }
    double mean = total / trials;
    // E[spine] = activation * L = 1.0 here.
    CHECK(std::abs(mean - 1.0) < 0.05);
}

TEST_CASE("tiny exact adaptivity gap: oracle vs independent enumeration") {
    ProbingInstance inst = gen_probing_instance(six_edge_params(), 3);
    CHECK(inst.tree->node_count() == 7);
    TinyProbingInstance tiny = to_tiny_probing(inst);
    CHECK(tiny.n == 6);

    Rat adaptive = optimal_adaptive_value(tiny);
    Rat nonadaptive = optimal_nonadaptive_value(tiny);
    Rat greedy = exact_greedy_value(inst);
    CHECK(greedy <= adaptive);
    CHECK(nonadaptive <= adaptive);
    CHECK(greedy * Rat(10) >= adaptive * Rat(9));  // greedy keeps >= 90% here

    // Independent no-memo recursion over knowledge states.
    std::function<Rat(uint32_t, uint32_t)> brute = [&](uint32_t probed, uint32_t active) -> Rat {
        Rat best(tiny.best_inner_units(active), tiny.unit_den);
        for (int e = 0; e < tiny.n; ++e) {
            if (probed & (1u << e)) continue;
            if (!tiny.outer_feasible(probed | (1u << e))) continue;
            const Rat& q = tiny.active_prob[static_cast<size_t>(e)];
            Rat v = q * brute(probed | (1u << e), active | (1u << e)) +
                    (Rat(1) - q) * brute(probed | (1u << e), active);
            if (v > best) best = v;
        }
        return best;
    };
    CHECK(brute(0, 0) == adaptive);

    // Single element: adaptivity is worthless.
    ProbingParams one = ProbingParams::make(1, 101, HardnessMode::kDesk, {1}, {1});
    TinyProbingInstance single = to_tiny_probing(gen_probing_instance(one, 5));
    CHECK(optimal_adaptive_value(single) == optimal_nonadaptive_value(single));

    // Deterministic values: gap exactly 1.
    ProbingParams det = six_edge_params();
    det.activation = Rat(1);
    TinyProbingInstance sure = to_tiny_probing(gen_probing_instance(det, 3));
    CHECK(optimal_adaptive_value(sure) == optimal_nonadaptive_value(sure));
}

TEST_CASE("gap estimation trivial cases") {
    CHECK_THROWS_AS(estimate_adaptivity_gap(six_edge_params(), 0, 4, 1), InputError);
    ProbingParams det = ProbingParams::make(2, 10007, HardnessMode::kDesk, {2, 2}, {2, 2}, Rat(1));
    ProbingGapStats stats = estimate_adaptivity_gap(det, 40, 4, 9);
    CHECK(stats.adaptive.mean == doctest::Approx(2.0));
    CHECK(stats.gap.ratio == doctest::Approx(1.0));
    CHECK(stats.nonadaptive_lower_bound);
    ProbingParams paper = ProbingParams::make(2, 1000003, HardnessMode::kPaperFaithful);
    CHECK_THROWS_AS(estimate_adaptivity_gap(paper, 10, 2, 1), CapacityError);
}
