#include "dco/probing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "dco/errors.hpp"
#include "dco/parallel.hpp"
#include "dco/rng.hpp"

namespace dco {

namespace {

long long checked_pow_ll(long long base, long long exp, const char* what) {
    unsigned __int128 acc = 1;
    for (long long i = 0; i < exp; ++i) {
        acc *= static_cast<unsigned __int128>(base);
        if (acc > (static_cast<unsigned __int128>(1) << 62))
            throw InputError(std::string(what) + " overflows 64 bits");
    }
    return static_cast<long long>(acc);
}

uint64_t element_act_key(int layer, long long height, long long a, long long b) {
    return prf(tag("probing-act"), static_cast<uint64_t>(layer), static_cast<uint64_t>(height),
               static_cast<uint64_t>(a), static_cast<uint64_t>(b));
}

}  // namespace

ProbingParams ProbingParams::make(int L, long long p, HardnessMode mode,
                                  std::vector<long long> arity_override,
                                  std::vector<long long> depth_override,
                                  Rat activation_override) {
    ProbingParams params;
    params.L = L;
    params.p = p;
    params.mode = mode;
    if (L < 1) throw InputError("L must be at least 1");
    if (arity_override.empty())
        params.arity.assign(static_cast<size_t>(L), static_cast<long long>(L) * L);
    else
        params.arity = std::move(arity_override);
    if (depth_override.empty()) {
        for (int ell = 1; ell <= L; ++ell)
            params.depth.push_back(checked_pow_ll(L, 2 * ell, "r_ell = L^{2 ell}"));
    } else {
        params.depth = std::move(depth_override);
    }
    if (activation_override >= Rat(0))
        params.activation = activation_override;
    else
        params.activation = L >= 2 ? Rat(2, static_cast<long long>(L) * L) : Rat(1);
    params.validate();
    return params;
}

long long ProbingParams::d_of(int ell) const { return std::max<long long>(1, r_of(ell) / L); }

long long ProbingParams::d_below_of(int ell) const {
    return std::max<long long>(1, r_of(ell) / (static_cast<long long>(L) * L));
}

void ProbingParams::validate() const {
    if (L < 1) throw InputError("L must be at least 1");
    if (p < 2) throw InputError("alphabet size p must be at least 2");
    if (static_cast<int>(arity.size()) != L || static_cast<int>(depth.size()) != L)
        throw InputError("arity and depth need one entry per layer");
    for (long long a : arity)
        if (a < 1) throw InputError("arity must be positive");
    for (long long r : depth)
        if (r < 1) throw InputError("block depth must be positive");
    if (activation < Rat(0) || activation > Rat(1)) throw InputError("activation probability out of range");
    if (mode == HardnessMode::kPaperFaithful) {
        unsigned __int128 rl4 = 1;
        for (int i = 0; i < 4; ++i) rl4 *= static_cast<unsigned __int128>(depth[static_cast<size_t>(L - 1)]);
        if (rl4 * 8 >= static_cast<unsigned __int128>(p))
            throw InputError("paper-faithful mode requires r_L^4 < p/8");
    }
}

// ---------------------------------------------------------------------------
// Generation

namespace {

std::shared_ptr<ProbingTree> build_tree(const ProbingParams& params, uint64_t seed) {
    auto tree = std::make_shared<ProbingTree>();
    tree->nodes.push_back({});  // root
    tree->blocks_by_layer.assign(static_cast<size_t>(params.L) + 1, {});

    struct Pending {
        long long root_node;
        int layer;
    };
    std::vector<Pending> queue{{0, 1}};
    size_t q_head = 0;
    while (q_head < queue.size()) {
        auto [root_node, layer] = queue[q_head++];
        long long block = static_cast<long long>(tree->block_vectors.size());
        long long rho = params.r_of(layer);
        long long a = params.arity_of(layer);
        std::vector<long long> vec(static_cast<size_t>(rho));
        for (long long h = 0; h < rho; ++h)
            vec[static_cast<size_t>(h)] = uniform_prf(seed, tag("probing-vec"), static_cast<uint64_t>(block),
                                                      static_cast<uint64_t>(h), 0, params.p);
        tree->block_vectors.push_back(std::move(vec));
        tree->block_layer.push_back(layer);
        tree->blocks_by_layer[static_cast<size_t>(layer)].push_back(block);
        tree->block_node_begin.push_back(tree->node_count());

        std::vector<long long> frontier{root_node};
        long long offset = 0;
        for (long long h = 1; h <= rho; ++h) {
            std::vector<long long> next;
            next.reserve(frontier.size() * static_cast<size_t>(a));
            for (long long u : frontier) {
                tree->nodes[static_cast<size_t>(u)].first_child = tree->node_count();
                tree->nodes[static_cast<size_t>(u)].child_count = static_cast<int>(a);
                for (long long c = 0; c < a; ++c) {
                    ProbingTree::Node node;
                    node.parent = u;
                    node.layer = layer;
                    node.height = h;
                    node.block = block;
                    node.x = uniform_prf(seed, tag("probing-xe"), static_cast<uint64_t>(block),
                                         static_cast<uint64_t>(offset), 0, params.p);
                    ++offset;
                    next.push_back(tree->node_count());
                    tree->nodes.push_back(node);
                }
            }
            if (tree->node_count() > params.node_cap)
                throw CapacityError("desk probing tree exceeds node cap of " +
                                    std::to_string(params.node_cap) + " nodes");
            frontier = std::move(next);
        }
        tree->block_node_count.push_back(tree->node_count() - tree->block_node_begin.back());
        if (layer < params.L)
            for (long long leaf : frontier) queue.push_back({leaf, layer + 1});
    }
    for (long long v = 0; v < tree->node_count(); ++v)
        if (tree->nodes[static_cast<size_t>(v)].child_count == 0) tree->leaves.push_back(v);
    return tree;
}

}  // namespace

ProbingInstance gen_probing_instance(const ProbingParams& params, uint64_t seed) {
    params.validate();
    ProbingInstance inst;
    inst.params = params;
    inst.seed = seed;
    inst.unit_den = 1;
    for (int ell = 1; ell <= params.L; ++ell) inst.unit_den = std::lcm(inst.unit_den, params.r_of(ell));
    for (int ell = 1; ell <= params.L; ++ell) inst.layer_units.push_back(inst.unit_den / params.r_of(ell));

    if (params.mode == HardnessMode::kDesk) {
        auto tree = build_tree(params, seed);
        if (params.clone_blocks) {
            auto [layer, i, j] = *params.clone_blocks;
            if (layer < 1 || layer > params.L) throw InputError("clone hook layer out of range");
            const auto& blocks = tree->blocks_by_layer[static_cast<size_t>(layer)];
            if (i < 0 || j < 0 || i >= static_cast<long long>(blocks.size()) ||
                j >= static_cast<long long>(blocks.size()) || i == j)
                throw InputError("clone hook block indices out of range");
            long long b1 = blocks[static_cast<size_t>(i)], b2 = blocks[static_cast<size_t>(j)];
            tree->block_vectors[static_cast<size_t>(b2)] = tree->block_vectors[static_cast<size_t>(b1)];
            for (long long k = 0; k < tree->block_node_count[static_cast<size_t>(b1)]; ++k)
                tree->nodes[static_cast<size_t>(tree->block_node_begin[static_cast<size_t>(b2)] + k)].x =
                    tree->nodes[static_cast<size_t>(tree->block_node_begin[static_cast<size_t>(b1)] + k)].x;
        }
        inst.tree = tree;
        inst.materialized = true;
    } else {
        if (params.clone_blocks) throw InputError("clone hook requires desk mode");
        inst.materialized = false;
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Lazy address walking

namespace {

struct LazyCursor {
    int layer = 1;
    long long height = 0;  // consumed edges within the current block
    uint64_t block_key = 0;
    uint64_t chain = 0;

    static LazyCursor root(const ProbingInstance& inst) {
        LazyCursor c;
        c.layer = 1;
        c.height = 0;
        c.block_key = prf(inst.seed, tag("lazy-block-root"));
        c.chain = prf(inst.seed, tag("lazy-chain-root"));
        return c;
    }

    // Consume one child edge; returns its element.
    ProbingElement descend(const ProbingInstance& inst, long long child) {
        const ProbingParams& pr = inst.params;
        if (height == pr.r_of(layer)) {
            ++layer;
            if (layer > pr.L) throw InputError("edge address runs past the last layer");
            height = 0;
            block_key = chain;
        }
        if (child < 0 || child >= pr.arity_of(layer)) throw InputError("edge address child index out of range");
        ++height;
        chain = prf(chain, static_cast<uint64_t>(child));
        ProbingElement e;
        e.layer = layer;
        e.height = height;
        e.a = uniform_prf(inst.seed, tag("lazy-vec"), block_key, static_cast<uint64_t>(height), 0,
                          pr.p);
        e.b = uniform_prf(inst.seed, tag("lazy-xe"), chain, 0, 0, pr.p);
        return e;
    }

    // Element of a sibling edge without moving the cursor.
    ProbingElement peek(const ProbingInstance& inst, long long child) const {
        LazyCursor copy = *this;
        return copy.descend(inst, child);
    }
};

}  // namespace

ProbingElement ProbingInstance::element_of_node(long long node) const {
    if (!materialized) throw InputError("node addressing requires a materialized instance");
    if (node <= 0 || node >= tree->node_count()) throw InputError("node id out of range");
    const auto& nd = tree->nodes[static_cast<size_t>(node)];
    ProbingElement e;
    e.layer = nd.layer;
    e.height = nd.height;
    e.a = tree->block_vectors[static_cast<size_t>(nd.block)][static_cast<size_t>(nd.height - 1)];
    e.b = nd.x;
    return e;
}

ProbingElement ProbingInstance::element_of_edge(const std::vector<long long>& address) const {
    if (address.empty()) throw InputError("empty edge address");
    if (materialized) {
        long long node = 0;
        for (long long c : address) {
            const auto& nd = tree->nodes[static_cast<size_t>(node)];
            if (c < 0 || c >= nd.child_count) throw InputError("edge address child index out of range");
            node = nd.first_child + c;
        }
        return element_of_node(node);
    }
    LazyCursor cur = LazyCursor::root(*this);
    ProbingElement e;
    for (long long c : address) e = cur.descend(*this, c);
    return e;
}

bool ProbingRealization::active(const ProbingElement& e) const {
    return bernoulli_prf(prf(seed, element_act_key(e.layer, e.height, e.a, e.b)), activation);
}

ProbingRealization sample_probing_realization(const ProbingInstance& inst, uint64_t seed) {
    ProbingRealization real;
    real.seed = seed;
    real.activation = inst.params.activation;
    return real;
}

Caterpillar random_caterpillar(const ProbingInstance& inst, uint64_t seed) {
    Rng rng(prf(seed, tag("caterpillar")));
    Caterpillar cat;
    for (int ell = 1; ell <= inst.params.L; ++ell)
        for (long long h = 0; h < inst.params.r_of(ell); ++h)
            cat.spine.push_back(
                static_cast<long long>(rng.below(static_cast<uint64_t>(inst.params.arity_of(ell)))));
    return cat;
}

long long caterpillar_leaf(const ProbingInstance& inst, const Caterpillar& cat) {
    if (!inst.materialized) throw InputError("caterpillar_leaf requires a materialized instance");
    long long node = 0;
    for (long long c : cat.spine) {
        const auto& nd = inst.tree->nodes[static_cast<size_t>(node)];
        if (c < 0 || c >= nd.child_count) throw InputError("caterpillar spine out of range");
        node = nd.first_child + c;
    }
    return node;
}

// ---------------------------------------------------------------------------
// Code verification

bool ProbingIntersectionReport::any_violation() const {
    for (const auto& l : layers)
        if (l.cross_violations > 0 || l.same_violations > 0) return true;
    return false;
}

namespace {

// One block's vector coordinates and x draws, desk or lazy.
struct BlockProbe {
    const ProbingInstance* inst;
    bool desk;
    long long block = -1;   // desk
    uint64_t key = 0;       // lazy
    long long root_node = -1;

    long long vec(long long h) const {  // 1-based height
        if (desk)
            return inst->tree->block_vectors[static_cast<size_t>(block)][static_cast<size_t>(h - 1)];
        return uniform_prf(inst->seed, tag("lazy-vec"), key, static_cast<uint64_t>(h), 0, inst->params.p);
    }
};

// Cursor inside one block, tracking the x-chain (lazy) or node id (desk).
struct BlockCursor {
    long long node = -1;  // desk
    uint64_t chain = 0;   // lazy

    static BlockCursor at_root(const BlockProbe& b) {
        BlockCursor c;
        if (b.desk)
            c.node = b.root_node;
        else
            c.chain = b.key;
        return c;
    }

    long long x_of_child(const BlockProbe& b, long long child) const {
        if (b.desk) {
            const auto& nd = b.inst->tree->nodes[static_cast<size_t>(node)];
            return b.inst->tree->nodes[static_cast<size_t>(nd.first_child + child)].x;
        }
        return uniform_prf(b.inst->seed, tag("lazy-xe"), prf(chain, static_cast<uint64_t>(child)), 0, 0,
                           b.inst->params.p);
    }

    void descend(const BlockProbe& b, long long child) {
        if (b.desk) {
            const auto& nd = b.inst->tree->nodes[static_cast<size_t>(node)];
            node = nd.first_child + child;
        } else {
            chain = prf(chain, static_cast<uint64_t>(child));
        }
    }
};

BlockProbe sample_block(const ProbingInstance& inst, int layer, uint64_t key, Rng& rng) {
    BlockProbe b;
    b.inst = &inst;
    b.desk = inst.materialized;
    if (b.desk) {
        const auto& blocks = inst.tree->blocks_by_layer[static_cast<size_t>(layer)];
        b.block = blocks[rng.below(blocks.size())];
        b.root_node = -1;
        // Recover the block root: parent of its first node.
        long long first = inst.tree->block_node_begin[static_cast<size_t>(b.block)];
        b.root_node = inst.tree->nodes[static_cast<size_t>(first)].parent;
    } else {
        b.key = key;
    }
    return b;
}

}  // namespace

ProbingIntersectionReport verify_probing_code(const ProbingInstance& inst, long pair_budget,
                                              uint64_t seed) {
    if (pair_budget < 1) throw InputError("pair budget must be at least 1");
    const ProbingParams& params = inst.params;
    ProbingIntersectionReport report;
    double rl = static_cast<double>(params.r_of(params.L));
    for (int ell = 1; ell <= params.L; ++ell) {
        ProbingIntersections st;
        st.layer = ell;
        st.d = params.d_of(ell);
        st.d_below = params.d_below_of(ell);
        st.cross_bound =
            std::pow(rl * rl * rl / static_cast<double>(params.p), static_cast<double>(st.d_below + 1));
        st.same_bound =
            std::pow(rl * rl * rl * rl / static_cast<double>(params.p), static_cast<double>(st.d + 1));
        long long rho = params.r_of(ell);
        long long a = params.arity_of(ell);
        Rng rng(prf(seed, tag("verify-probing"), static_cast<uint64_t>(ell)));

        bool has_two_blocks = inst.materialized
                                  ? inst.tree->blocks_by_layer[static_cast<size_t>(ell)].size() >= 2
                                  : ell >= 2;
        if (has_two_blocks) {
            for (long i = 0; i < pair_budget; ++i) {
                BlockProbe b1 = sample_block(inst, ell, prf(seed, tag("vb1"), static_cast<uint64_t>(ell),
                                                            static_cast<uint64_t>(i)),
                                             rng);
                BlockProbe b2 = sample_block(inst, ell, prf(seed, tag("vb2"), static_cast<uint64_t>(ell),
                                                            static_cast<uint64_t>(i)),
                                             rng);
                if (b1.desk && b1.block == b2.block) continue;  // want distinct blocks
                // Path in b1, caterpillar in b2; count heights sharing an element.
                BlockCursor path = BlockCursor::at_root(b1);
                BlockCursor spine = BlockCursor::at_root(b2);
                long long shared_heights = 0;
                for (long long h = 1; h <= rho; ++h) {
                    long long pc = static_cast<long long>(rng.below(static_cast<uint64_t>(a)));
                    long long px = path.x_of_child(b1, pc);
                    bool heights_share = false;
                    if (b1.vec(h) == b2.vec(h)) {
                        for (long long c = 0; c < a && !heights_share; ++c)
                            if (spine.x_of_child(b2, c) == px) heights_share = true;
                    }
                    if (heights_share) ++shared_heights;
                    path.descend(b1, pc);
                    spine.descend(b2, static_cast<long long>(rng.below(static_cast<uint64_t>(a))));
                }
                ++st.cross_pairs;
                st.cross_max = std::max(st.cross_max, shared_heights);
                if (shared_heights > st.d_below) ++st.cross_violations;
            }
        }
        {
            for (long i = 0; i < pair_budget; ++i) {
                BlockProbe b = sample_block(inst, ell, prf(seed, tag("vb"), static_cast<uint64_t>(ell),
                                                           static_cast<uint64_t>(i)),
                                            rng);
                std::vector<long long> pc(static_cast<size_t>(rho)), sc(static_cast<size_t>(rho));
                for (long long h = 0; h < rho; ++h) {
                    pc[static_cast<size_t>(h)] = static_cast<long long>(rng.below(static_cast<uint64_t>(a)));
                    sc[static_cast<size_t>(h)] = static_cast<long long>(rng.below(static_cast<uint64_t>(a)));
                }
                long long prefix = 0;
                while (prefix < rho && pc[static_cast<size_t>(prefix)] == sc[static_cast<size_t>(prefix)])
                    ++prefix;
                BlockCursor path = BlockCursor::at_root(b);
                BlockCursor spine = BlockCursor::at_root(b);
                long long shared = 0;
                for (long long h = 1; h <= rho; ++h) {
                    if (h > prefix) {
                        long long px = path.x_of_child(b, pc[static_cast<size_t>(h - 1)]);
                        for (long long c = 0; c < a; ++c)
                            if (spine.x_of_child(b, c) == px) {
                                ++shared;
                                break;
                            }
                    }
                    path.descend(b, pc[static_cast<size_t>(h - 1)]);
                    spine.descend(b, sc[static_cast<size_t>(h - 1)]);
                }
                ++st.same_pairs;
                st.same_max = std::max(st.same_max, shared);
                if (shared > st.d) ++st.same_violations;
            }
        }
        report.layers.push_back(std::move(st));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Adaptive greedy

ProbeTranscript run_adaptive_greedy(const ProbingInstance& inst, uint64_t realization_seed) {
    ProbingRealization real = sample_probing_realization(inst, realization_seed);
    const ProbingParams& params = inst.params;
    ProbeTranscript tr;
    tr.unit_den = inst.unit_den;

    if (inst.materialized) {
        long long node = 0;
        while (inst.tree->nodes[static_cast<size_t>(node)].child_count > 0) {
            const auto& nd = inst.tree->nodes[static_cast<size_t>(node)];
            int cc = nd.child_count;
            ProbeStep step;
            long long pick = -1;
            bool pick_active = false;
            for (int c = 0; c < cc; ++c) {
                ProbingElement e = inst.element_of_node(nd.first_child + c);
                bool act = real.active(e);
                if (c == 0) {
                    step.layer = e.layer;
                    step.height = e.height;
                }
                step.arity = cc;
                if (act) ++step.active_children;
                if (act && pick < 0) {
                    pick = c;
                    pick_active = true;
                }
            }
            tr.probes += cc;  // all children probed
            if (pick < 0) pick = 0;
            tr.steps.push_back(step);
            tr.spine.push_back(pick);
            if (pick_active)
                tr.value_units += inst.units_of_layer(step.layer);
            node = nd.first_child + pick;
        }
    } else {
        LazyCursor cur = LazyCursor::root(inst);
        long long total_depth = 0;
        for (int ell = 1; ell <= params.L; ++ell) total_depth += params.r_of(ell);
        for (long long d = 0; d < total_depth; ++d) {
            int layer_now = cur.layer;
            long long h_now = cur.height;
            if (h_now == params.r_of(layer_now)) {
                layer_now += 1;
                h_now = 0;
            }
            long long a = params.arity_of(layer_now);
            ProbeStep step;
            step.arity = static_cast<int>(a);
            long long pick = -1;
            bool pick_active = false;
            for (long long c = 0; c < a; ++c) {
                ProbingElement e = cur.peek(inst, c);
                step.layer = e.layer;
                step.height = e.height;
                bool act = real.active(e);
                if (act) ++step.active_children;
                if (act && pick < 0) {
                    pick = c;
                    pick_active = true;
                }
            }
            tr.probes += a;
            if (pick < 0) pick = 0;
            tr.steps.push_back(step);
            tr.spine.push_back(pick);
            cur.descend(inst, pick);
            if (pick_active) tr.value_units += inst.units_of_layer(step.layer);
        }
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Non-adaptive evaluation

namespace {

struct ProbedElements {
    // Element identity -> activation key, for membership tests. Values are
    // the element's layer (for units).
    std::unordered_map<uint64_t, int> by_key;

    void add(const ProbingElement& e) { by_key.emplace(element_act_key(e.layer, e.height, e.a, e.b), e.layer); }
};

// Spine elements plus all leg elements of the caterpillar.
struct CaterpillarElements {
    std::vector<ProbingElement> spine;                 // by depth
    std::vector<std::vector<ProbingElement>> legs;     // by depth: non-spine children of the node above
    ProbedElements probed;
};

CaterpillarElements collect_caterpillar(const ProbingInstance& inst, const Caterpillar& cat) {
    CaterpillarElements out;
    const ProbingParams& params = inst.params;
    long long total_depth = 0;
    for (int ell = 1; ell <= params.L; ++ell) total_depth += params.r_of(ell);
    if (static_cast<long long>(cat.spine.size()) != total_depth)
        throw InputError("caterpillar spine does not reach a leaf");

    if (inst.materialized) {
        long long node = 0;
        for (long long c : cat.spine) {
            const auto& nd = inst.tree->nodes[static_cast<size_t>(node)];
            if (c < 0 || c >= nd.child_count) throw InputError("caterpillar spine out of range");
            std::vector<ProbingElement> legs;
            for (int k = 0; k < nd.child_count; ++k) {
                ProbingElement e = inst.element_of_node(nd.first_child + k);
                out.probed.add(e);
                if (k == c)
                    out.spine.push_back(e);
                else
                    legs.push_back(e);
            }
            out.legs.push_back(std::move(legs));
            node = nd.first_child + c;
        }
    } else {
        LazyCursor cur = LazyCursor::root(inst);
        for (long long c : cat.spine) {
            int layer_now = cur.layer;
            long long h_now = cur.height;
            if (h_now == params.r_of(layer_now)) {
                layer_now += 1;
                h_now = 0;
            }
            long long a = params.arity_of(layer_now);
            std::vector<ProbingElement> legs;
            for (long long k = 0; k < a; ++k) {
                ProbingElement e = cur.peek(inst, k);
                out.probed.add(e);
                if (k == c)
                    out.spine.push_back(e);
                else
                    legs.push_back(e);
            }
            out.legs.push_back(std::move(legs));
            cur.descend(inst, c);
        }
    }
    return out;
}

// Exact best inner path over the whole materialized tree: any edge whose
// element coincides with a probed active element contributes.
long long exact_inner_units(const ProbingInstance& inst, const ProbedElements& probed,
                            const ProbingRealization& real) {
    const auto& tree = *inst.tree;
    std::vector<long long> best(static_cast<size_t>(tree.node_count()), 0);
    for (long long v = tree.node_count() - 1; v >= 1; --v) {
        const auto& nd = tree.nodes[static_cast<size_t>(v)];
        long long down = 0;
        if (nd.child_count > 0) {
            for (int c = 0; c < nd.child_count; ++c)
                down = std::max(down, best[static_cast<size_t>(nd.first_child + c)]);
        }
        ProbingElement e = inst.element_of_node(v);
        uint64_t key = element_act_key(e.layer, e.height, e.a, e.b);
        long long w = 0;
        if (probed.by_key.count(key) && real.active(e)) w = inst.units_of_layer(e.layer);
        best[static_cast<size_t>(v)] = w + down;
    }
    long long top = 0;
    const auto& root = tree.nodes[0];
    for (int c = 0; c < root.child_count; ++c)
        top = std::max(top, best[static_cast<size_t>(root.first_child + c)]);
    return top;
}

// Restricted evaluator: full spine, single-leg deviations, and a sample of
// alternative root-leaf paths. A lower bound on the exact inner optimum.
long long restricted_inner_units(const ProbingInstance& inst, const CaterpillarElements& cat,
                                 const ProbingRealization& real, long long trial_index, int alt_paths,
                                 uint64_t seed) {
    size_t depth = cat.spine.size();
    std::vector<long long> prefix(depth + 1, 0);
    for (size_t i = 0; i < depth; ++i) {
        long long w = real.active(cat.spine[i]) ? inst.units_of_layer(cat.spine[i].layer) : 0;
        prefix[i + 1] = prefix[i] + w;
    }
    long long best = prefix[depth];
    for (size_t i = 0; i < depth; ++i)
        for (const auto& leg : cat.legs[i]) {
            if (!real.active(leg)) continue;
            best = std::max(best, prefix[i] + inst.units_of_layer(leg.layer));
        }
    // Sampled alternative paths collect probed elements met along the way.
    const ProbingParams& params = inst.params;
    for (int s = 0; s < alt_paths; ++s) {
        Rng rng(prf(seed, tag("alt-path"), static_cast<uint64_t>(trial_index), static_cast<uint64_t>(s)));
        long long value = 0;
        if (inst.materialized) {
            long long node = 0;
            while (inst.tree->nodes[static_cast<size_t>(node)].child_count > 0) {
                const auto& nd = inst.tree->nodes[static_cast<size_t>(node)];
                long long c = static_cast<long long>(rng.below(static_cast<uint64_t>(nd.child_count)));
                node = nd.first_child + c;
                ProbingElement e = inst.element_of_node(node);
                uint64_t key = element_act_key(e.layer, e.height, e.a, e.b);
                if (cat.probed.by_key.count(key) && real.active(e)) value += inst.units_of_layer(e.layer);
            }
        } else {
            LazyCursor cur = LazyCursor::root(inst);
            long long total_depth = 0;
            for (int ell = 1; ell <= params.L; ++ell) total_depth += params.r_of(ell);
            for (long long d = 0; d < total_depth; ++d) {
                int layer_now = cur.layer;
                long long h_now = cur.height;
                if (h_now == params.r_of(layer_now)) {
                    layer_now += 1;
                }
                long long a = params.arity_of(layer_now);
                long long c = static_cast<long long>(rng.below(static_cast<uint64_t>(a)));
                ProbingElement e = cur.descend(inst, c);
                uint64_t key = element_act_key(e.layer, e.height, e.a, e.b);
                if (cat.probed.by_key.count(key) && real.active(e)) value += inst.units_of_layer(e.layer);
            }
        }
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

NonAdaptiveEval eval_nonadaptive(const ProbingInstance& inst, const Caterpillar& cat, long trials,
                                 uint64_t seed, InnerEval mode, int alt_paths) {
    if (trials <= 0) throw InputError("trials must be positive");
    bool exact;
    switch (mode) {
        case InnerEval::kExactTree:
            if (!inst.materialized)
                throw CapacityError("exact inner maximization requires a materialized instance");
            exact = true;
            break;
        case InnerEval::kRestricted:
            exact = false;
            break;
        case InnerEval::kAuto:
        default:
            exact = inst.materialized && inst.tree->node_count() <= 300'000 && trials <= 2000;
            break;
    }
    CaterpillarElements elems = collect_caterpillar(inst, cat);
    std::vector<double> vals(static_cast<size_t>(trials));
    double den = static_cast<double>(inst.unit_den);
    for (long t = 0; t < trials; ++t) {
        ProbingRealization real =
            sample_probing_realization(inst, prf(seed, tag("na-trial"), static_cast<uint64_t>(t)));
        long long units = exact ? exact_inner_units(inst, elems.probed, real)
                                : restricted_inner_units(inst, elems, real, t, alt_paths, seed);
        vals[static_cast<size_t>(t)] = static_cast<double>(units) / den;
    }
    NonAdaptiveEval out;
    out.value = mean_ci(vals, 0.95);
    out.exact = exact;
    return out;
}

ProbingGapStats estimate_adaptivity_gap(const ProbingParams& params, long trials,
                                        long caterpillar_samples, uint64_t seed, int threads) {
    if (trials <= 0) throw InputError("trials must be positive for gap estimation");
    if (caterpillar_samples <= 0) throw InputError("need at least one caterpillar sample");
    if (params.mode != HardnessMode::kDesk) throw CapacityError("gap estimation requires desk mode");
    ProbingInstance inst = gen_probing_instance(params, seed);

    std::vector<double> adaptive(static_cast<size_t>(trials));
    double den = static_cast<double>(inst.unit_den);
    parallel_for(trials, threads, [&](long t) {
        ProbeTranscript tr =
            run_adaptive_greedy(inst, prf(seed, tag("adaptive-trial"), static_cast<uint64_t>(t)));
        adaptive[static_cast<size_t>(t)] = static_cast<double>(tr.value_units) / den;
    });

    ProbingGapStats out;
    out.trials = trials;
    out.adaptive = mean_ci(adaptive, 0.95);
    out.caterpillar_values.resize(static_cast<size_t>(caterpillar_samples));
    std::vector<CaterpillarElements> elems(static_cast<size_t>(caterpillar_samples));
    for (long k = 0; k < caterpillar_samples; ++k) {
        Caterpillar cat = random_caterpillar(inst, prf(seed, tag("cat"), static_cast<uint64_t>(k)));
        elems[static_cast<size_t>(k)] = collect_caterpillar(inst, cat);
    }
    std::vector<std::vector<double>> na(static_cast<size_t>(caterpillar_samples),
                                        std::vector<double>(static_cast<size_t>(trials)));
    parallel_for(trials, threads, [&](long t) {
        ProbingRealization real =
            sample_probing_realization(inst, prf(seed, tag("na-trial"), static_cast<uint64_t>(t)));
        for (long k = 0; k < caterpillar_samples; ++k) {
            long long units = restricted_inner_units(inst, elems[static_cast<size_t>(k)], real, t, 8,
                                                     prf(seed, tag("alt"), static_cast<uint64_t>(k)));
            na[static_cast<size_t>(k)][static_cast<size_t>(t)] = static_cast<double>(units) / den;
        }
    });
    out.best_caterpillar = 0;
    for (long k = 0; k < caterpillar_samples; ++k) {
        out.caterpillar_values[static_cast<size_t>(k)] = mean_ci(na[static_cast<size_t>(k)], 0.95);
        if (out.caterpillar_values[static_cast<size_t>(k)].mean >
            out.caterpillar_values[out.best_caterpillar].mean)
            out.best_caterpillar = static_cast<size_t>(k);
    }
    out.best_nonadaptive = out.caterpillar_values[out.best_caterpillar];
    out.gap = ratio_ci(out.adaptive, out.best_nonadaptive);
    out.nonadaptive_lower_bound = true;
    return out;
}

// ---------------------------------------------------------------------------
// Tiny adapters

TinyProbingInstance to_tiny_probing(const ProbingInstance& inst, const TinyInstanceCap& cap) {
    if (!inst.materialized) throw InputError("tiny adapter requires a materialized instance");
    const auto& tree = *inst.tree;
    long long edges = tree.node_count() - 1;
    if (edges > 8)
        throw CapacityError("tiny probing adapter caps at 8 edges, instance has " + std::to_string(edges));
    TinyProbingInstance tiny;
    tiny.n = static_cast<int>(edges);
    tiny.unit_den = inst.unit_den;
    std::unordered_set<uint64_t> distinct;
    for (long long v = 1; v < tree.node_count(); ++v) {
        ProbingElement e = inst.element_of_node(v);
        if (!distinct.insert(element_act_key(e.layer, e.height, e.a, e.b)).second)
            throw InputError("tiny probing adapter requires distinct edge elements");
        tiny.value_units.push_back(inst.units_of_layer(e.layer));
        tiny.active_prob.push_back(inst.params.activation);
    }
    for (long long leaf : tree.leaves) {
        ElemSet path(static_cast<size_t>(tiny.n));
        ElemSet cat(static_cast<size_t>(tiny.n));
        for (long long v = leaf; v != -1; v = tree.nodes[static_cast<size_t>(v)].parent) {
            if (v != 0) path.set(static_cast<size_t>(v - 1));
            const auto& nd = tree.nodes[static_cast<size_t>(v)];
            for (int c = 0; c < nd.child_count; ++c) cat.set(static_cast<size_t>(nd.first_child + c - 1));
            if (v != 0) cat.set(static_cast<size_t>(v - 1));
        }
        tiny.inner.push_back(std::move(path));
        tiny.outer.push_back(std::move(cat));
    }
    tiny.validate(cap);
    return tiny;
}

Rat exact_greedy_value(const ProbingInstance& inst, const TinyInstanceCap& cap) {
    if (!inst.materialized) throw InputError("exact greedy enumeration requires a materialized instance");
    const auto& tree = *inst.tree;
    long long edges = tree.node_count() - 1;
    if (edges > cap.max_elements)
        throw CapacityError("exact greedy enumeration caps at " + std::to_string(cap.max_elements) +
                            " edges");
    // Distinct elements required so outcome bits map one-to-one onto edges.
    std::unordered_set<uint64_t> distinct;
    for (long long v = 1; v < tree.node_count(); ++v) {
        ProbingElement e = inst.element_of_node(v);
        if (!distinct.insert(element_act_key(e.layer, e.height, e.a, e.b)).second)
            throw InputError("exact greedy enumeration requires distinct edge elements");
    }
    const Rat& q = inst.params.activation;
    Rat total(0);
    for (uint32_t mask = 0; mask < (1u << edges); ++mask) {
        long long units = 0;
        long long node = 0;
        while (tree.nodes[static_cast<size_t>(node)].child_count > 0) {
            const auto& nd = tree.nodes[static_cast<size_t>(node)];
            long long pick = -1;
            for (int c = 0; c < nd.child_count; ++c) {
                long long edge = nd.first_child + c - 1;
                if (mask & (1u << edge)) {
                    pick = c;
                    break;
                }
            }
            bool active = pick >= 0;
            if (pick < 0) pick = 0;
            node = nd.first_child + pick;
            if (active) units += inst.units_of_layer(tree.nodes[static_cast<size_t>(node)].layer);
        }
        if (units == 0) continue;
        Rat p(1);
        for (long long e = 0; e < edges; ++e) p *= (mask & (1u << e)) ? q : Rat(1) - q;
        total += p * Rat(units, inst.unit_den);
    }
    return total;
}

}  // namespace dco
