// Command-line front end: secretary runs, hardness-instance generation,
// code verification, gap simulations, exact oracles and config-driven
// experiments. Exit codes: 0 ok, 2 input error, 3 capacity error,
// 4 invariant violation.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "dco/errors.hpp"
#include "dco/experiment.hpp"
#include "dco/instance_io.hpp"
#include "dco/oracles.hpp"
#include "dco/probing.hpp"
#include "dco/prophet.hpp"
#include "dco/rational.hpp"

namespace {

using dco::ExperimentConfig;
using nlohmann::json;

struct CommonOpts {
    uint64_t seed = 1;
    long trials = 100;
    std::string out = "results.csv";
    int threads = 0;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--trials", opts.trials, "number of trials");
    cmd->add_option("--out", opts.out, "output file");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    cmd->add_flag("--strict", opts.strict, "stop on the first per-item error");
}

json base_config(const std::string& kind, const CommonOpts& opts) {
    json doc;
    doc["kind"] = kind;
    doc["seed"] = opts.seed;
    doc["trials"] = opts.trials;
    doc["out"] = opts.out;
    doc["threads"] = opts.threads;
    doc["strict"] = opts.strict;
    return doc;
}

int run_app(int argc, char** argv) {
    CLI::App app{"downward-closed online selection toolkit"};
    app.require_subcommand(1);

    // ----- secretary -------------------------------------------------------
    auto* secretary = app.add_subcommand("secretary", "single-log secretary algorithm");
    auto* sec_run = secretary->add_subcommand("run", "run trials over random arrival orders");
    CommonOpts sec_opts;
    std::string sec_instance;
    std::string sec_algorithm = "pipeline";
    std::string sec_phases_out;
    add_common(sec_run, sec_opts);
    sec_run->add_option("--instance", sec_instance, "secretary instance JSON")->required();
    sec_run->add_option("--algorithm", sec_algorithm, "pipeline | implementable | ideal");
    sec_run->add_option("--phases-out", sec_phases_out, "long-format per-phase diagnostics CSV");
    sec_run->callback([&]() {
        json doc = base_config("secretary-run", sec_opts);
        doc["instance"] = sec_instance;
        doc["algorithm"] = sec_algorithm;
        if (!sec_phases_out.empty()) doc["phases_out"] = sec_phases_out;
        dco::run_experiment(ExperimentConfig{doc});
        std::printf("wrote %s\n", sec_opts.out.c_str());
    });

    // ----- prophet ---------------------------------------------------------
    auto* prophet = app.add_subcommand("prophet", "layered-forest prophet hardness instances");
    struct HardnessOpts {
        int L = 2;
        long long p = 10000;
        std::string mode = "desk";
        std::vector<long long> r, branching;
        long pairs = 100000;
    } pro;
    CommonOpts pro_opts;

    auto* pro_gen = prophet->add_subcommand("gen", "write an instance descriptor");
    pro_gen->add_option("--L", pro.L, "layer count");
    pro_gen->add_option("--p", pro.p, "alphabet size");
    pro_gen->add_option("--mode", pro.mode, "desk | paper-faithful");
    pro_gen->add_option("--r", pro.r, "per-layer bucket counts");
    pro_gen->add_option("--branching", pro.branching, "per-layer branching (desk)");
    add_common(pro_gen, pro_opts);
    pro_gen->callback([&]() {
        auto params = dco::ProphetParams::make(
            pro.L, pro.p, pro.mode == "desk" ? dco::HardnessMode::kDesk : dco::HardnessMode::kPaperFaithful,
            pro.r, pro.branching);
        dco::write_text_file(pro_opts.out, dco::prophet_descriptor(params, pro_opts.seed).dump(2) + "\n");
        std::printf("wrote %s\n", pro_opts.out.c_str());
    });

    auto* pro_verify = prophet->add_subcommand("verify", "sample subset pairs and check code distances");
    CommonOpts pv_opts;
    pv_opts.out = "prophet-verify.csv";
    pro_verify->add_option("--L", pro.L, "layer count");
    pro_verify->add_option("--p", pro.p, "alphabet size");
    pro_verify->add_option("--mode", pro.mode, "desk | paper-faithful");
    pro_verify->add_option("--r", pro.r, "per-layer bucket counts");
    pro_verify->add_option("--branching", pro.branching, "per-layer branching");
    pro_verify->add_option("--pairs", pro.pairs, "sampled pairs per layer");
    add_common(pro_verify, pv_opts);
    pro_verify->callback([&]() {
        json doc = base_config("prophet-verify", pv_opts);
        doc["L"] = pro.L;
        doc["p"] = pro.p;
        doc["mode"] = pro.mode;
        if (!pro.r.empty()) doc["r"] = pro.r;
        if (!pro.branching.empty()) doc["branching"] = pro.branching;
        doc["pairs"] = pro.pairs;
        dco::run_experiment(ExperimentConfig{doc});
        std::printf("wrote %s\n", pv_opts.out.c_str());
    });

    auto* pro_sim = prophet->add_subcommand("simulate", "estimate the online gap on desk instances");
    CommonOpts ps_opts;
    ps_opts.out = "prophet-gap.csv";
    std::vector<int> pro_Ls{2, 3};
    std::vector<long long> ps_r, ps_branching;
    pro_sim->add_option("--L", pro_Ls, "layer counts to sweep");
    pro_sim->add_option("--p", pro.p, "alphabet size");
    pro_sim->add_option("--r", ps_r, "bucket counts (single-L sweeps only)");
    pro_sim->add_option("--branching", ps_branching, "per-layer branching (single-L sweeps only)");
    add_common(pro_sim, ps_opts);
    pro_sim->callback([&]() {
        json doc = base_config("prophet-gap", ps_opts);
        doc["L"] = pro_Ls;
        doc["p"] = pro.p;
        if (!ps_r.empty() || !ps_branching.empty()) {
            if (pro_Ls.size() != 1)
                throw dco::InputError("--r/--branching overrides need a single --L");
            if (!ps_r.empty()) doc["r"] = json::array({ps_r});
            if (!ps_branching.empty()) doc["branching"] = json::array({ps_branching});
        }
        dco::run_experiment(ExperimentConfig{doc});
        std::printf("wrote %s\n", ps_opts.out.c_str());
    });

    // ----- probing ---------------------------------------------------------
    auto* probing = app.add_subcommand("probing", "meta-tree stochastic-probing instances");
    struct ProbingOpts {
        int L = 2;
        long long p = 10000;
        std::string mode = "desk";
        std::vector<long long> arity, depths;
        long pairs = 100000;
        long caterpillars = 16;
    } prb;
    CommonOpts prb_opts;

    auto* prb_gen = probing->add_subcommand("gen", "write an instance descriptor");
    prb_gen->add_option("--L", prb.L, "layer count");
    prb_gen->add_option("--p", prb.p, "alphabet size");
    prb_gen->add_option("--mode", prb.mode, "desk | paper-faithful");
    prb_gen->add_option("--arity", prb.arity, "per-layer block arity");
    prb_gen->add_option("--depths", prb.depths, "per-layer block depth");
    add_common(prb_gen, prb_opts);
    prb_gen->callback([&]() {
        auto params = dco::ProbingParams::make(
            prb.L, prb.p, prb.mode == "desk" ? dco::HardnessMode::kDesk : dco::HardnessMode::kPaperFaithful,
            prb.arity, prb.depths);
        dco::write_text_file(prb_opts.out, dco::probing_descriptor(params, prb_opts.seed).dump(2) + "\n");
        std::printf("wrote %s\n", prb_opts.out.c_str());
    });

    auto* prb_verify = probing->add_subcommand("verify", "sample path/caterpillar pairs per layer");
    CommonOpts prbv_opts;
    prbv_opts.out = "probing-verify.csv";
    prb_verify->add_option("--L", prb.L, "layer count");
    prb_verify->add_option("--p", prb.p, "alphabet size");
    prb_verify->add_option("--mode", prb.mode, "desk | paper-faithful");
    prb_verify->add_option("--arity", prb.arity, "per-layer block arity");
    prb_verify->add_option("--depths", prb.depths, "per-layer block depth");
    prb_verify->add_option("--pairs", prb.pairs, "sampled pairs per layer");
    add_common(prb_verify, prbv_opts);
    prb_verify->callback([&]() {
        json doc = base_config("probing-verify", prbv_opts);
        doc["L"] = prb.L;
        doc["p"] = prb.p;
        doc["mode"] = prb.mode;
        if (!prb.arity.empty()) doc["arity"] = prb.arity;
        if (!prb.depths.empty()) doc["depths"] = prb.depths;
        doc["pairs"] = prb.pairs;
        dco::run_experiment(ExperimentConfig{doc});
        std::printf("wrote %s\n", prbv_opts.out.c_str());
    });

    auto* prb_sim = probing->add_subcommand("simulate", "estimate the adaptivity gap on desk instances");
    CommonOpts prbs_opts;
    prbs_opts.out = "probing-gap.csv";
    std::vector<int> prb_Ls{2, 3};
    std::vector<long long> prbs_arity, prbs_depths;
    prb_sim->add_option("--L", prb_Ls, "layer counts to sweep");
    prb_sim->add_option("--p", prb.p, "alphabet size");
    prb_sim->add_option("--arity", prbs_arity, "block arity (single-L sweeps only)");
    prb_sim->add_option("--depths", prbs_depths, "block depths (single-L sweeps only)");
    prb_sim->add_option("--caterpillars", prb.caterpillars, "sampled caterpillars");
    add_common(prb_sim, prbs_opts);
    prb_sim->callback([&]() {
        json doc = base_config("probing-gap", prbs_opts);
        doc["L"] = prb_Ls;
        doc["p"] = prb.p;
        doc["caterpillars"] = prb.caterpillars;
        if (!prbs_arity.empty() || !prbs_depths.empty()) {
            if (prb_Ls.size() != 1) throw dco::InputError("--arity/--depths overrides need a single --L");
            if (!prbs_arity.empty()) doc["arity"] = json::array({prbs_arity});
            if (!prbs_depths.empty()) doc["depths"] = json::array({prbs_depths});
        }
        dco::run_experiment(ExperimentConfig{doc});
        std::printf("wrote %s\n", prbs_opts.out.c_str());
    });

    // ----- oracle ----------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "exact reference solvers (desk scale)");
    std::string oracle_instance;
    auto* o_off = oracle->add_subcommand("offline", "brute-force offline optimum");
    o_off->add_option("--instance", oracle_instance, "secretary instance JSON")->required();
    o_off->callback([&]() {
        auto li = dco::load_instance(oracle_instance);
        if (li.kind != dco::LoadedInstance::Kind::kSecretary)
            throw dco::InputError("offline oracle expects a secretary instance");
        auto [set, value] = dco::brute_force_offline_opt(li.f, li.oracle);
        std::printf("offline optimum = %s (%g), set size %zu\n", dco::to_string(value).c_str(),
                    dco::to_double(value), set.count());
    });

    auto* o_online = oracle->add_subcommand("opt-online", "optimal online policy value (tiny instances)");
    o_online->add_option("--instance", oracle_instance, "prophet descriptor JSON")->required();
    o_online->callback([&]() {
        auto li = dco::load_instance(oracle_instance);
        if (li.kind != dco::LoadedInstance::Kind::kProphet)
            throw dco::InputError("opt-online expects a prophet descriptor");
        auto inst = dco::gen_prophet_instance(li.prophet_params, li.seed);
        auto tiny = dco::to_tiny_online(inst);
        dco::Rat online = dco::optimal_online_value(tiny);
        dco::Rat hindsight = dco::exact_hindsight_value(tiny);
        std::printf("optimal online  = %s (%g)\n", dco::to_string(online).c_str(), dco::to_double(online));
        std::printf("hindsight       = %s (%g)\n", dco::to_string(hindsight).c_str(),
                    dco::to_double(hindsight));
    });

    auto* o_adaptive = oracle->add_subcommand("opt-adaptive", "optimal adaptive probing value (tiny instances)");
    o_adaptive->add_option("--instance", oracle_instance, "probing descriptor JSON")->required();
    o_adaptive->callback([&]() {
        auto li = dco::load_instance(oracle_instance);
        if (li.kind != dco::LoadedInstance::Kind::kProbing)
            throw dco::InputError("opt-adaptive expects a probing descriptor");
        auto inst = dco::gen_probing_instance(li.probing_params, li.seed);
        auto tiny = dco::to_tiny_probing(inst);
        dco::Rat adaptive = dco::optimal_adaptive_value(tiny);
        dco::Rat nonadaptive = dco::optimal_nonadaptive_value(tiny);
        std::printf("optimal adaptive     = %s (%g)\n", dco::to_string(adaptive).c_str(),
                    dco::to_double(adaptive));
        std::printf("optimal non-adaptive = %s (%g)\n", dco::to_string(nonadaptive).c_str(),
                    dco::to_double(nonadaptive));
        if (nonadaptive > dco::Rat(0))
            std::printf("adaptivity gap       = %g\n", dco::to_double(adaptive / nonadaptive));
    });

    // ----- experiment ------------------------------------------------------
    auto* experiment = app.add_subcommand("experiment", "config-driven experiment runner");
    auto* exp_run = experiment->add_subcommand("run", "run a config file");
    std::string config_path;
    bool exp_strict = false;
    exp_run->add_option("--config", config_path, "experiment config JSON (or a provenance sidecar)")
        ->required();
    exp_run->add_flag("--strict", exp_strict, "stop on the first per-item error");
    exp_run->callback([&]() {
        ExperimentConfig config = dco::load_config(config_path);
        if (exp_strict) config.doc["strict"] = true;
        dco::run_experiment(config);
        std::printf("wrote %s\n", config.out().c_str());
    });

    CLI11_PARSE(app, argc, argv);
    return dco::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const dco::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return dco::kExitInput;
    } catch (const dco::CapacityError& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return dco::kExitCapacity;
    } catch (const dco::InvariantError& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return dco::kExitInvariant;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
