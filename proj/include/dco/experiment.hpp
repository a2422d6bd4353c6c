#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dco/constraints.hpp"
#include "dco/secretary.hpp"
#include "dco/xos.hpp"

namespace dco {

// ---------------------------------------------------------------------------
// Instance zoo used by experiments, the CLI and the test suites.

struct SecretaryInstance {
    XosFunction f;
    FeasibilityOracle oracle;
};

// Single all-ones clause over floor(n/L) disjoint L-sets: the classic binary
// hard family for downward-closed constraints.
SecretaryInstance make_bik_instance(int n, int L);

// `sets` disjoint maximal sets whose values grade down by powers of two, with
// 2^k elements at scale 2^-k: every ladder rung carries the same mass, the
// worst-case profile for the phase schedule.
SecretaryInstance make_graded_instance(int n, int sets);

// Single all-ones clause with one maximal set of k elements; used for the
// sample-third concentration check (max element share 1/k).
SecretaryInstance make_share_bounded_instance(int n, int k);

// Random ladder-valued instance: every nonzero clause entry is a scale of
// scale_ladder(n), so runs need no further preprocessing.
SecretaryInstance make_random_ladder_instance(int n, int num_clauses, int num_sets, uint64_t seed);

// ---------------------------------------------------------------------------
// Experiment orchestration: a config fully determines all result bytes.

struct ExperimentConfig {
    nlohmann::json doc;  // kind-specific fields, seed, trials, out, threads

    std::string kind() const { return doc.value("kind", ""); }
    std::string out() const { return doc.value("out", "results.csv"); }
    uint64_t seed() const { return doc.value("seed", 1ULL); }
    long trials() const { return doc.value("trials", 0L); }
    int threads() const { return doc.value("threads", 0); }
    bool strict() const { return doc.value("strict", false); }
};

ExperimentConfig load_config(const std::string& path);

// Executes the experiment, writes the CSV and a provenance sidecar
// (<out>.meta.json) sufficient to reproduce it byte-for-byte.
void run_experiment(const ExperimentConfig& config);

// CSV helpers shared by experiments: stable formatting so that reruns are
// byte-identical.
std::string csv_double(double v);

struct CsvWriter {
    std::string kind;
    int version = 1;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const;
};

}  // namespace dco
