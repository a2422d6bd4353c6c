#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "dco/errors.hpp"
#include "dco/experiment.hpp"
#include "dco/instance_io.hpp"
#include "dco/oracles.hpp"

using namespace dco;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    fs::path dir = fs::temp_directory_path() / "dco-io-tests";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("secretary instance round-trips byte-identically") {
    SecretaryInstance inst = make_random_ladder_instance(9, 2, 3, 5);
    auto doc = secretary_to_json(inst.f, inst.oracle);
    std::string text = doc.dump(2) + "\n";
    fs::path path = tmp_dir() / "roundtrip.json";
    write_text_file(path.string(), text);
    LoadedInstance li = load_instance(path.string());
    REQUIRE(li.kind == LoadedInstance::Kind::kSecretary);
    CHECK(li.f.n == inst.f.n);
    std::string again = secretary_to_json(li.f, li.oracle).dump(2) + "\n";
    CHECK(again == text);
}

TEST_CASE("schema violations carry field diagnostics") {
    fs::path path = tmp_dir() / "bad.json";
    write_text_file(path.string(), "{\"format\":\"secretary-instance\",\"n\":2,\"clauses\":[[[1,0],[1,1]]],"
                                   "\"maximal_sets\":[[0]]}");
    CHECK_THROWS_WITH_AS(load_instance(path.string()),
                         doctest::Contains("denominator must be positive"), InputError);

    write_text_file(path.string(), "{\"format\":\"secretary-instance\",\"n\":2,"
                                   "\"clauses\":[[[1,1],[1,1]]],\"maximal_sets\":[[0,5]]}");
    CHECK_THROWS_AS(load_instance(path.string()), InputError);

    write_text_file(path.string(), "not json");
    CHECK_THROWS_WITH_AS(load_instance(path.string()), doctest::Contains("parse error"), InputError);
}

TEST_CASE("antichain violations are invariant errors") {
    fs::path path = tmp_dir() / "antichain.json";
    write_text_file(path.string(),
                    "{\"format\":\"secretary-instance\",\"n\":3,\"clauses\":[[[1,1],[1,1],[1,1]]],"
                    "\"maximal_sets\":[[0,1],[0]]}");
    CHECK_THROWS_AS(load_instance(path.string()), InvariantError);
}

TEST_CASE("prophet descriptor digest detects drift") {
    ProphetParams params = ProphetParams::make(2, 100, HardnessMode::kDesk, {2, 2}, {2, 2});
    auto doc = prophet_descriptor(params, 7);
    fs::path path = tmp_dir() / "prophet.json";
    write_text_file(path.string(), doc.dump(2) + "\n");
    LoadedInstance li = load_instance(path.string());
    CHECK(li.kind == LoadedInstance::Kind::kProphet);
    CHECK(li.prophet_params.L == 2);
    CHECK(li.seed == 7);

    doc["digest"] = "00000000deadbeef";
    write_text_file(path.string(), doc.dump(2) + "\n");
    CHECK_THROWS_AS(load_instance(path.string()), InvariantError);

    // Identical descriptors from identical inputs, twice.
    CHECK(prophet_descriptor(params, 7).dump() == prophet_descriptor(params, 7).dump());
}

TEST_CASE("probing descriptor digest round-trip") {
    ProbingParams params = ProbingParams::make(2, 1009, HardnessMode::kDesk, {2, 2}, {2, 2});
    auto doc = probing_descriptor(params, 9);
    fs::path path = tmp_dir() / "probing.json";
    write_text_file(path.string(), doc.dump(2) + "\n");
    LoadedInstance li = load_instance(path.string());
    CHECK(li.kind == LoadedInstance::Kind::kProbing);
    CHECK(li.probing_params.depth == std::vector<long long>{2, 2});
}

TEST_CASE("experiment reruns are byte-identical and sidecars reproduce") {
    fs::path dir = tmp_dir();
    SecretaryInstance inst = make_bik_instance(12, 3);
    fs::path inst_path = dir / "bik12.json";
    write_text_file(inst_path.string(), secretary_to_json(inst.f, inst.oracle).dump(2) + "\n");

    nlohmann::json doc;
    doc["kind"] = "secretary-run";
    doc["instance"] = inst_path.string();
    doc["algorithm"] = "implementable";
    doc["trials"] = 40;
    doc["seed"] = 5;
    doc["threads"] = 2;
    fs::path out1 = dir / "run1.csv";
    fs::path out2 = dir / "run2.csv";
    doc["out"] = out1.string();
    run_experiment(ExperimentConfig{doc});
    doc["out"] = out2.string();
    doc["threads"] = 1;  // thread count must not change the bytes
    run_experiment(ExperimentConfig{doc});
    std::string a = read_text_file(out1.string());
    std::string b = read_text_file(out2.string());
    // Only the out path differs between configs; compare data bytes.
    CHECK(a == b);
    CHECK(a.find("# kind=secretary-run v=1") == 0);

    // Rerun from the provenance sidecar.
    ExperimentConfig rerun = load_config(out1.string() + ".meta.json");
    fs::path out3 = dir / "run3.csv";
    rerun.doc["out"] = out3.string();
    run_experiment(rerun);
    CHECK(read_text_file(out3.string()) == a);
}

TEST_CASE("trials must be positive before any work happens") {
    nlohmann::json doc;
    doc["kind"] = "secretary-run";
    doc["family"] = {{"kind", "bik"}, {"n", 12}, {"L", 3}};
    doc["trials"] = 0;
    fs::path out = tmp_dir() / "never.csv";
    doc["out"] = out.string();
    std::error_code ec;
    fs::remove(out, ec);
    CHECK_THROWS_AS(run_experiment(ExperimentConfig{doc}), InputError);
    CHECK(!fs::exists(out));
}

TEST_CASE("sweep items record errors unless strict") {
    fs::path dir = tmp_dir();
    nlohmann::json doc;
    doc["kind"] = "prophet-gap";
    doc["L"] = {2, 9};  // the second item blows the node cap
    doc["p"] = 1009;
    doc["r"] = {{2, 4}, {2, 2, 2, 2, 2, 2, 2, 2, 2}};
    doc["branching"] = {{4, 8}, {9, 9, 9, 9, 9, 9, 9, 9, 9}};
    doc["trials"] = 20;
    doc["seed"] = 5;
    fs::path out = dir / "mixed.csv";
    doc["out"] = out.string();
    run_experiment(ExperimentConfig{doc});
    std::string text = read_text_file(out.string());
    CHECK(text.find("9,error,nan") != std::string::npos);
    CHECK(text.find("2,hindsight,") != std::string::npos);
    doc["strict"] = true;
    CHECK_THROWS_AS(run_experiment(ExperimentConfig{doc}), CapacityError);
}

TEST_CASE("oracle cross-check through instance files") {
    SecretaryInstance inst = make_random_ladder_instance(10, 2, 3, 77);
    fs::path path = tmp_dir() / "oracle.json";
    write_text_file(path.string(), secretary_to_json(inst.f, inst.oracle).dump(2) + "\n");
    LoadedInstance li = load_instance(path.string());
    auto [set, value] = brute_force_offline_opt(li.f, li.oracle);
    auto direct = brute_force_offline_opt(inst.f, inst.oracle);
    CHECK(value == direct.second);
    CHECK(set == direct.first);
}
