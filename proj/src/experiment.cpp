#include "dco/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "dco/errors.hpp"
#include "dco/instance_io.hpp"
#include "dco/oracles.hpp"
#include "dco/parallel.hpp"
#include "dco/probing.hpp"
#include "dco/prophet.hpp"
#include "dco/rng.hpp"

namespace dco {

using nlohmann::json;

SecretaryInstance make_bik_instance(int n, int L) {
    if (n < 3 || L < 1 || L > n) throw InputError("bad BIK family shape");
    SecretaryInstance inst;
    inst.f.n = n;
    XosClause ones;
    ones.values.assign(static_cast<size_t>(n), Rat(1));
    inst.f.clauses.push_back(std::move(ones));
    MaximalFamily fam;
    for (int start = 0; start + L <= n; start += L) {
        ElemSet s(static_cast<size_t>(n));
        for (int i = 0; i < L; ++i) s.set(static_cast<size_t>(start + i));
        fam.sets.push_back(std::move(s));
    }
    inst.oracle = FeasibilityOracle::explicit_family(n, std::move(fam));
    return inst;
}

SecretaryInstance make_graded_instance(int n, int sets) {
    if (n < 3 || sets < 1 || sets > n) throw InputError("bad graded family shape");
    SecretaryInstance inst;
    inst.f.n = n;
    XosClause clause;
    clause.values.assign(static_cast<size_t>(n), Rat(0));
    MaximalFamily fam;
    int size = n / sets;
    for (int s = 0; s < sets; ++s) {
        ElemSet m(static_cast<size_t>(n));
        for (int j = 0; j < size; ++j) {
            int id = s * size + j;
            m.set(static_cast<size_t>(id));
            // Rung k holds 2^k elements of value 2^-k: every scale carries
            // the same total mass inside a set.
            int rung = static_cast<int>(std::floor(std::log2(static_cast<double>(j + 1))));
            clause.values[static_cast<size_t>(id)] = pow2(-rung);
        }
        fam.sets.push_back(std::move(m));
    }
    inst.f.clauses.push_back(std::move(clause));
    inst.oracle = FeasibilityOracle::explicit_family(n, std::move(fam));
    return inst;
}

SecretaryInstance make_share_bounded_instance(int n, int k) {
    if (k < 1 || k > n) throw InputError("bad share-bounded shape");
    SecretaryInstance inst;
    inst.f.n = n;
    XosClause ones;
    ones.values.assign(static_cast<size_t>(n), Rat(1));
    inst.f.clauses.push_back(std::move(ones));
    MaximalFamily fam;
    ElemSet s(static_cast<size_t>(n));
    for (int i = 0; i < k; ++i) s.set(static_cast<size_t>(i));
    fam.sets.push_back(std::move(s));
    inst.oracle = FeasibilityOracle::explicit_family(n, std::move(fam));
    return inst;
}

SecretaryInstance make_random_ladder_instance(int n, int num_clauses, int num_sets, uint64_t seed) {
    if (n < 3 || num_clauses < 1 || num_sets < 1) throw InputError("bad random instance shape");
    ScaleLadder ladder = scale_ladder(n);
    Rng rng(prf(seed, tag("random-instance")));
    SecretaryInstance inst;
    inst.f.n = n;
    for (int j = 0; j < num_clauses; ++j) {
        XosClause c;
        c.values.reserve(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) {
            // Zero with probability 1/4, otherwise a scale biased to the top
            // rungs so multiple phases see work.
            if (rng.below(4) == 0) {
                c.values.push_back(Rat(0));
            } else {
                int hi = std::min(ladder.size(), 6);
                c.values.push_back(ladder.at(static_cast<int>(rng.below(static_cast<uint64_t>(hi)))));
            }
        }
        inst.f.clauses.push_back(std::move(c));
    }
    MaximalFamily fam;
    for (int s = 0; s < num_sets; ++s) {
        ElemSet m(static_cast<size_t>(n));
        // Sets of size about n/2, overlapping freely.
        for (int t = 0; t < n; ++t)
            if (rng.coin()) m.set(static_cast<size_t>(t));
        if (m.none()) m.set(rng.below(static_cast<uint64_t>(n)));
        fam.sets.push_back(std::move(m));
    }
    fam = fam.antichain_reduced();
    if (fam.sets.empty()) {
        ElemSet m(static_cast<size_t>(n));
        m.set(0);
        fam.sets.push_back(std::move(m));
    }
    inst.oracle = FeasibilityOracle::explicit_family(n, std::move(fam));
    return inst;
}

// ---------------------------------------------------------------------------

std::string csv_double(double v) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvWriter::render() const {
    std::string out = "# kind=" + kind + " v=" + std::to_string(version) + "\n";
    for (size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += i + 1 < header.size() ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += i + 1 < row.size() ? ',' : '\n';
        }
    }
    return out;
}

ExperimentConfig load_config(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw InputError(path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (doc.contains("config")) doc = doc["config"];  // accept a provenance sidecar
    ExperimentConfig config;
    config.doc = std::move(doc);
    if (config.kind().empty()) throw InputError(path + ": config needs a 'kind'");
    return config;
}

namespace {

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

SecretaryInstance make_family_instance(const json& spec) {
    std::string kind = spec.value("kind", "");
    if (kind == "bik") return make_bik_instance(spec.at("n").get<int>(), spec.at("L").get<int>());
    if (kind == "graded") return make_graded_instance(spec.at("n").get<int>(), spec.value("sets", 1));
    if (kind == "share-bounded")
        return make_share_bounded_instance(spec.at("n").get<int>(), spec.at("k").get<int>());
    if (kind == "random")
        return make_random_ladder_instance(spec.at("n").get<int>(), spec.value("clauses", 2),
                                           spec.value("sets", 4), spec.value("instance_seed", 1ULL));
    throw InputError("unknown family kind '" + kind + "'");
}

SecretaryInstance resolve_secretary_instance(const json& doc) {
    if (doc.contains("instance")) {
        LoadedInstance li = load_instance(doc["instance"].get<std::string>());
        if (li.kind != LoadedInstance::Kind::kSecretary)
            throw InputError("secretary experiment needs a secretary instance file");
        return SecretaryInstance{std::move(li.f), std::move(li.oracle)};
    }
    if (doc.contains("family")) return make_family_instance(doc["family"]);
    throw InputError("secretary experiment needs 'instance' or 'family'");
}

struct SecretaryTrialRow {
    std::string branch = "main";
    double value = 0.0;
    double tau = 0.0;
    long selections = 0;
    int invariant_violations = 0;
    bool feasible = true;
    std::vector<PhaseDiag> phases;  // kept only when a phase CSV is requested
};

// Direct runs need the stream length divisible by three; dummy elements carry
// zero value and belong to no maximal set, so they only consume positions.
SecretaryInstance pad_to_multiple_of_3(const SecretaryInstance& inst) {
    int pad = (3 - inst.f.n % 3) % 3;
    if (pad == 0) return inst;
    SecretaryInstance out;
    out.f = inst.f;
    out.f.n += pad;
    for (auto& c : out.f.clauses) c.values.resize(static_cast<size_t>(out.f.n), Rat(0));
    MaximalFamily fam;
    for (const auto& m : inst.oracle.family.sets) {
        ElemSet s(static_cast<size_t>(out.f.n));
        for (size_t t = m.find_first(); t != ElemSet::npos; t = m.find_next(t)) s.set(t);
        fam.sets.push_back(std::move(s));
    }
    out.oracle = FeasibilityOracle::explicit_family(out.f.n, std::move(fam));
    return out;
}

SecretaryTrialRow run_one_secretary_trial(const SecretaryInstance& inst, const std::string& algorithm,
                                          uint64_t trial_seed, bool keep_phases = false) {
    Rng order_rng(prf(trial_seed, tag("order")));
    SecretaryTrialRow row;
    if (algorithm == "pipeline") {
        std::vector<int> order = order_rng.permutation(inst.f.n);
        PipelineResult res = run_pipeline(inst.f, inst.oracle, order, prf(trial_seed, tag("run")));
        row.branch = res.record.branch == Branch::kSingleChoice ? "single-choice" : "main";
        row.value = to_double(res.record.value);
        row.tau = to_double(res.record.tau_alg);
        row.selections = res.record.selection_steps;
        row.invariant_violations = res.record.invariant_violations;
        row.feasible = res.record.feasible_throughout;
        if (keep_phases) row.phases = res.record.phases;
        return row;
    }
    SecretaryInstance padded = pad_to_multiple_of_3(inst);
    int n = padded.f.n;
    std::vector<int> order = order_rng.permutation(n);
    ScaleLadder ladder = scale_ladder(n);
    SecretaryRunRecord rec =
        algorithm == "ideal"
            ? run_ideal_secretary(padded.f, padded.oracle, order, ladder, prf(trial_seed, tag("run")))
            : run_secretary(padded.f, padded.oracle, order, ladder, prf(trial_seed, tag("run")));
    row.value = to_double(rec.value);
    row.tau = to_double(rec.tau_alg);
    row.selections = rec.selection_steps;
    row.invariant_violations = rec.invariant_violations;
    row.feasible = rec.feasible_throughout;
    if (keep_phases) row.phases = std::move(rec.phases);
    return row;
}

CsvWriter experiment_secretary_run(const ExperimentConfig& config) {
    if (config.trials() <= 0) throw InputError("trials must be positive");
    SecretaryInstance inst = resolve_secretary_instance(config.doc);
    std::string algorithm = config.doc.value("algorithm", "pipeline");
    double opt = to_double(offline_optimum(inst.f, inst.oracle).value);

    long trials = config.trials();
    bool keep_phases = config.doc.contains("phases_out");
    std::vector<SecretaryTrialRow> rows(static_cast<size_t>(trials));
    int threads = config.threads() > 0 ? config.threads() : default_threads();
    parallel_for(trials, threads, [&](long t) {
        rows[static_cast<size_t>(t)] = run_one_secretary_trial(
            inst, algorithm, prf(config.seed(), tag("trial"), static_cast<uint64_t>(t)), keep_phases);
    });

    if (keep_phases) {
        CsvWriter phases;
        phases.kind = "secretary-run-phases";
        phases.header = {"trial", "phase",     "scale",   "opt_leq_value",
                         "tau_below", "opt_c_size", "alg_added", "invariant_lhs"};
        for (long t = 0; t < trials; ++t)
            for (const auto& ph : rows[static_cast<size_t>(t)].phases)
                phases.rows.push_back({std::to_string(t), std::to_string(ph.scale_index),
                                       to_string(ph.scale), to_string(ph.opt_leq_value),
                                       to_string(ph.tau_below), std::to_string(ph.opt_c_size),
                                       std::to_string(ph.alg_added), csv_double(ph.invariant_lhs)});
        write_text_file(config.doc["phases_out"].get<std::string>(), phases.render());
    }

    CsvWriter csv;
    csv.kind = "secretary-run";
    csv.header = {"trial",      "branch", "value",   "opt_offline",
                  "ratio",      "tau_alg", "selections", "invariant_violations",
                  "feasible"};
    for (long t = 0; t < trials; ++t) {
        const auto& r = rows[static_cast<size_t>(t)];
        csv.rows.push_back({std::to_string(t), r.branch, csv_double(r.value), csv_double(opt),
                            csv_double(opt > 0 ? r.value / opt : 0.0), csv_double(r.tau),
                            std::to_string(r.selections), std::to_string(r.invariant_violations),
                            r.feasible ? "1" : "0"});
    }
    return csv;
}

CsvWriter experiment_secretary_sweep(const ExperimentConfig& config) {
    if (config.trials() <= 0) throw InputError("trials must be positive");
    if (!config.doc.contains("n") || !config.doc["n"].is_array())
        throw InputError("secretary-sweep needs an array 'n'");
    int L = config.doc.value("L", 3);
    std::string family = config.doc.value("family_kind", "bik");
    std::string algorithm = config.doc.value("algorithm", "implementable");
    long trials = config.trials();
    int threads = config.threads() > 0 ? config.threads() : default_threads();

    CsvWriter csv;
    csv.kind = "secretary-sweep";
    csv.header = {"n", "L", "trial", "value", "opt_offline", "ratio", "error"};
    for (const auto& jn : config.doc["n"]) {
        int n = jn.get<int>();
        try {
            SecretaryInstance inst =
                family == "graded" ? make_graded_instance(n, L) : make_bik_instance(n, L);
            double opt = to_double(offline_optimum(inst.f, inst.oracle).value);
            std::vector<SecretaryTrialRow> rows(static_cast<size_t>(trials));
            parallel_for(trials, threads, [&](long t) {
                rows[static_cast<size_t>(t)] = run_one_secretary_trial(
                    inst, algorithm,
                    prf(config.seed(), tag("sweep"), static_cast<uint64_t>(n), static_cast<uint64_t>(t)));
            });
            for (long t = 0; t < trials; ++t) {
                const auto& r = rows[static_cast<size_t>(t)];
                csv.rows.push_back({std::to_string(n), std::to_string(L), std::to_string(t),
                                    csv_double(r.value), csv_double(opt),
                                    csv_double(opt > 0 ? r.value / opt : 0.0), ""});
            }
        } catch (const std::exception& e) {
            if (config.strict()) throw;
            csv.rows.push_back({std::to_string(n), std::to_string(L), "-", "nan", "nan", "nan",
                                csv_safe(e.what())});
        }
    }
    return csv;
}

std::vector<long long> ll_list_at(const json& doc, const char* key, size_t index) {
    if (!doc.contains(key)) return {};
    const auto& arr = doc[key];
    if (!arr.is_array() || index >= arr.size()) throw InputError(std::string(key) + " must align with 'L'");
    std::vector<long long> out;
    for (const auto& v : arr[index]) out.push_back(v.get<long long>());
    return out;
}

void push_series(CsvWriter& csv, const std::string& group, const std::string& series, const MeanCI& m) {
    csv.rows.push_back({group, series, csv_double(m.mean), csv_double(m.lo()), csv_double(m.hi()),
                        std::to_string(m.n), ""});
}

CsvWriter experiment_prophet_gap(const ExperimentConfig& config) {
    if (config.trials() <= 0) throw InputError("trials must be positive");
    if (!config.doc.contains("L") || !config.doc["L"].is_array())
        throw InputError("prophet-gap needs an array 'L'");
    long long p = config.doc.value("p", 10000LL);
    int threads = config.threads() > 0 ? config.threads() : default_threads();

    CsvWriter csv;
    csv.kind = "prophet-gap";
    csv.header = {"L", "series", "mean", "lo", "hi", "count", "error"};
    for (size_t li = 0; li < config.doc["L"].size(); ++li) {
        int L = config.doc["L"][li].get<int>();
        std::string g = std::to_string(L);
        try {
            ProphetParams params =
                ProphetParams::make(L, p, HardnessMode::kDesk, ll_list_at(config.doc, "r", li),
                                    ll_list_at(config.doc, "branching", li));
            ProphetGapStats stats = estimate_prophet_gap(
                params, config.trials(), prf(config.seed(), tag("L"), static_cast<uint64_t>(L)), threads);
            push_series(csv, g, "hindsight", stats.online.benchmark);
            push_series(csv, g, "greedy-descent(offline)", stats.greedy_descent);
            for (size_t i = 0; i < stats.online.policy_names.size(); ++i)
                push_series(csv, g, stats.online.policy_names[i], stats.online.policy_values[i]);
            csv.rows.push_back({g, "gap:hindsight/best-policy", csv_double(stats.online.gap.ratio),
                                csv_double(stats.online.gap.lo), csv_double(stats.online.gap.hi),
                                std::to_string(stats.trials), ""});
        } catch (const std::exception& e) {
            if (config.strict()) throw;
            csv.rows.push_back({g, "error", "nan", "nan", "nan", "0", csv_safe(e.what())});
        }
    }
    return csv;
}

CsvWriter experiment_probing_gap(const ExperimentConfig& config) {
    if (config.trials() <= 0) throw InputError("trials must be positive");
    if (!config.doc.contains("L") || !config.doc["L"].is_array())
        throw InputError("probing-gap needs an array 'L'");
    long long p = config.doc.value("p", 10000LL);
    long caterpillars = config.doc.value("caterpillars", 16L);
    int threads = config.threads() > 0 ? config.threads() : default_threads();

    CsvWriter csv;
    csv.kind = "probing-gap";
    csv.header = {"L", "series", "mean", "lo", "hi", "count", "error"};
    for (size_t li = 0; li < config.doc["L"].size(); ++li) {
        int L = config.doc["L"][li].get<int>();
        std::string g = std::to_string(L);
        try {
            ProbingParams params =
                ProbingParams::make(L, p, HardnessMode::kDesk, ll_list_at(config.doc, "arity", li),
                                    ll_list_at(config.doc, "depths", li));
            ProbingGapStats stats = estimate_adaptivity_gap(
                params, config.trials(), caterpillars,
                prf(config.seed(), tag("L"), static_cast<uint64_t>(L)), threads);
            push_series(csv, g, "adaptive-greedy", stats.adaptive);
            push_series(csv, g, "best-caterpillar(lower bound)", stats.best_nonadaptive);
            csv.rows.push_back({g, "gap:adaptive/non-adaptive(lower bound)", csv_double(stats.gap.ratio),
                                csv_double(stats.gap.lo), csv_double(stats.gap.hi),
                                std::to_string(stats.trials), ""});
        } catch (const std::exception& e) {
            if (config.strict()) throw;
            csv.rows.push_back({g, "error", "nan", "nan", "nan", "0", csv_safe(e.what())});
        }
    }
    return csv;
}

CsvWriter experiment_prophet_verify(const ExperimentConfig& config) {
    long pairs = config.doc.value("pairs", 100000L);
    std::vector<long long> r, branching;
    if (config.doc.contains("r"))
        for (const auto& v : config.doc["r"]) r.push_back(v.get<long long>());
    if (config.doc.contains("branching"))
        for (const auto& v : config.doc["branching"]) branching.push_back(v.get<long long>());
    ProphetParams params = ProphetParams::make(
        config.doc.at("L").get<int>(), config.doc.value("p", 10000LL),
        config.doc.value("mode", "desk") == "desk" ? HardnessMode::kDesk : HardnessMode::kPaperFaithful,
        r, branching);
    ProphetInstance inst = gen_prophet_instance(params, config.seed());
    IntersectionReport report = verify_prophet_code(inst, pairs, prf(config.seed(), tag("verify")));
    CsvWriter csv;
    csv.kind = "prophet-verify";
    csv.header = {"layer",  "d",        "d_below",   "same_pairs", "same_max", "diff_pairs",
                  "diff_max", "viol_d", "viol_d_below", "union_bound"};
    for (const auto& l : report.layers)
        csv.rows.push_back({std::to_string(l.layer), std::to_string(l.d), std::to_string(l.d_below),
                            std::to_string(l.same_parent_pairs), std::to_string(l.same_parent_max),
                            std::to_string(l.diff_parent_pairs), std::to_string(l.diff_parent_max),
                            std::to_string(l.violations_d), std::to_string(l.violations_d_below),
                            csv_double(l.union_bound)});
    return csv;
}

CsvWriter experiment_probing_verify(const ExperimentConfig& config) {
    long pairs = config.doc.value("pairs", 100000L);
    std::vector<long long> arity, depths;
    if (config.doc.contains("arity"))
        for (const auto& v : config.doc["arity"]) arity.push_back(v.get<long long>());
    if (config.doc.contains("depths"))
        for (const auto& v : config.doc["depths"]) depths.push_back(v.get<long long>());
    ProbingParams params = ProbingParams::make(
        config.doc.at("L").get<int>(), config.doc.value("p", 10000LL),
        config.doc.value("mode", "paper-faithful") == "desk" ? HardnessMode::kDesk
                                                             : HardnessMode::kPaperFaithful,
        arity, depths);
    ProbingInstance inst = gen_probing_instance(params, config.seed());
    ProbingIntersectionReport report = verify_probing_code(inst, pairs, prf(config.seed(), tag("verify")));
    CsvWriter csv;
    csv.kind = "probing-verify";
    csv.header = {"layer",      "d",         "d_below",    "cross_pairs", "cross_max", "cross_viol",
                  "cross_bound", "same_pairs", "same_max", "same_viol",   "same_bound"};
    for (const auto& l : report.layers)
        csv.rows.push_back({std::to_string(l.layer), std::to_string(l.d), std::to_string(l.d_below),
                            std::to_string(l.cross_pairs), std::to_string(l.cross_max),
                            std::to_string(l.cross_violations), csv_double(l.cross_bound),
                            std::to_string(l.same_pairs), std::to_string(l.same_max),
                            std::to_string(l.same_violations), csv_double(l.same_bound)});
    return csv;
}

}  // namespace

void run_experiment(const ExperimentConfig& config) {
    auto start = std::chrono::steady_clock::now();
    CsvWriter csv;
    std::string kind = config.kind();
    if (kind == "secretary-run")
        csv = experiment_secretary_run(config);
    else if (kind == "secretary-sweep")
        csv = experiment_secretary_sweep(config);
    else if (kind == "prophet-gap")
        csv = experiment_prophet_gap(config);
    else if (kind == "probing-gap")
        csv = experiment_probing_gap(config);
    else if (kind == "prophet-verify")
        csv = experiment_prophet_verify(config);
    else if (kind == "probing-verify")
        csv = experiment_probing_verify(config);
    else
        throw InputError("unknown experiment kind '" + kind + "'");

    write_text_file(config.out(), csv.render());
    auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    json sidecar;
    sidecar["config"] = config.doc;
    sidecar["tool"] = "dco 0.1.0";
    sidecar["wall_ms"] = wall.count();
    write_text_file(config.out() + ".meta.json", sidecar.dump(2) + "\n");
}

}  // namespace dco
