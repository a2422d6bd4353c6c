#include "dco/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "dco/errors.hpp"
#include "dco/rng.hpp"

namespace dco {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

namespace {

[[noreturn]] void field_error(const std::string& origin, const std::string& field, const std::string& what) {
    throw InputError(origin + ": field '" + field + "': " + what);
}

Rat parse_rat(const json& j, const std::string& origin, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        field_error(origin, field, "expected [numerator, denominator]");
    long long num = j[0].get<long long>();
    long long den = j[1].get<long long>();
    if (den <= 0) field_error(origin, field, "denominator must be positive");
    if (num < 0) field_error(origin, field, "values must be nonnegative");
    return Rat(num, den);
}

json rat_to_json(const Rat& r) { return json::array({r.numerator(), r.denominator()}); }

HardnessMode parse_mode(const json& j, const std::string& origin) {
    std::string m = j.value("mode", "desk");
    if (m == "desk") return HardnessMode::kDesk;
    if (m == "paper-faithful") return HardnessMode::kPaperFaithful;
    field_error(origin, "mode", "expected 'desk' or 'paper-faithful'");
}

std::vector<long long> parse_ll_list(const json& j, const std::string& origin, const std::string& field) {
    if (!j.is_array()) field_error(origin, field, "expected an array of integers");
    std::vector<long long> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) field_error(origin, field, "expected integers");
        out.push_back(v.get<long long>());
    }
    return out;
}

LoadedInstance parse_secretary(const json& doc, const std::string& origin) {
    LoadedInstance inst;
    inst.kind = LoadedInstance::Kind::kSecretary;
    if (!doc.contains("n") || !doc["n"].is_number_integer()) field_error(origin, "n", "missing integer");
    int n = doc["n"].get<int>();
    if (n < 1) field_error(origin, "n", "must be positive");
    inst.f.n = n;
    if (!doc.contains("clauses") || !doc["clauses"].is_array())
        field_error(origin, "clauses", "missing array");
    for (size_t ci = 0; ci < doc["clauses"].size(); ++ci) {
        const auto& jc = doc["clauses"][ci];
        if (!jc.is_array() || static_cast<int>(jc.size()) != n)
            field_error(origin, "clauses[" + std::to_string(ci) + "]", "expected " + std::to_string(n) +
                                                                           " entries");
        XosClause clause;
        for (size_t t = 0; t < jc.size(); ++t)
            clause.values.push_back(parse_rat(jc[t], origin, "clauses[" + std::to_string(ci) + "][" +
                                                                 std::to_string(t) + "]"));
        inst.f.clauses.push_back(std::move(clause));
    }
    if (!doc.contains("maximal_sets") || !doc["maximal_sets"].is_array())
        field_error(origin, "maximal_sets", "missing array");
    MaximalFamily fam;
    for (size_t si = 0; si < doc["maximal_sets"].size(); ++si) {
        const auto& js = doc["maximal_sets"][si];
        if (!js.is_array()) field_error(origin, "maximal_sets[" + std::to_string(si) + "]", "expected array");
        ElemSet s(static_cast<size_t>(n));
        for (const auto& v : js) {
            if (!v.is_number_integer()) field_error(origin, "maximal_sets", "expected integer element ids");
            long long id = v.get<long long>();
            if (id < 0 || id >= n)
                field_error(origin, "maximal_sets[" + std::to_string(si) + "]",
                            "element id " + std::to_string(id) + " out of range [0," + std::to_string(n) + ")");
            s.set(static_cast<size_t>(id));
        }
        fam.sets.push_back(std::move(s));
    }
    if (!fam.is_antichain())
        throw InvariantError(origin + ": maximal_sets violate the antichain invariant (one set contains another)");
    inst.f.validate();
    inst.oracle = FeasibilityOracle::explicit_family(n, std::move(fam));
    return inst;
}

ProphetParams parse_prophet_params(const json& doc, const std::string& origin) {
    if (!doc.contains("L")) field_error(origin, "L", "missing");
    int L = doc["L"].get<int>();
    long long p = doc.value("p", 10000LL);
    HardnessMode mode = parse_mode(doc, origin);
    std::vector<long long> r, branching;
    if (doc.contains("r")) r = parse_ll_list(doc["r"], origin, "r");
    if (doc.contains("branching")) branching = parse_ll_list(doc["branching"], origin, "branching");
    Rat act = doc.contains("activation") ? parse_rat(doc["activation"], origin, "activation") : Rat(-1);
    ProphetParams params = ProphetParams::make(L, p, mode, r, branching, act);
    if (doc.contains("node_cap")) params.node_cap = doc["node_cap"].get<long long>();
    return params;
}

ProbingParams parse_probing_params(const json& doc, const std::string& origin) {
    if (!doc.contains("L")) field_error(origin, "L", "missing");
    int L = doc["L"].get<int>();
    long long p = doc.value("p", 10000LL);
    HardnessMode mode = parse_mode(doc, origin);
    std::vector<long long> arity, depth;
    if (doc.contains("arity")) arity = parse_ll_list(doc["arity"], origin, "arity");
    if (doc.contains("depths")) depth = parse_ll_list(doc["depths"], origin, "depths");
    Rat act = doc.contains("activation") ? parse_rat(doc["activation"], origin, "activation") : Rat(-1);
    ProbingParams params = ProbingParams::make(L, p, mode, arity, depth, act);
    if (doc.contains("node_cap")) params.node_cap = doc["node_cap"].get<long long>();
    return params;
}

}  // namespace

LoadedInstance parse_instance(const json& doc, const std::string& origin) {
    if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string())
        throw InputError(origin + ": missing 'format' field");
    std::string format = doc["format"].get<std::string>();
    if (format == "secretary-instance") return parse_secretary(doc, origin);
    if (format == "prophet-descriptor" || format == "probing-descriptor") {
        LoadedInstance inst;
        inst.seed = doc.value("seed", 0ULL);
        if (format == "prophet-descriptor") {
            inst.kind = LoadedInstance::Kind::kProphet;
            inst.prophet_params = parse_prophet_params(doc, origin);
            if (doc.contains("digest")) {
                uint64_t expect = std::stoull(doc["digest"].get<std::string>(), nullptr, 16);
                uint64_t got = prophet_digest(inst.prophet_params, inst.seed);
                if (expect != got)
                    throw InvariantError(origin + ": descriptor digest mismatch (stored " +
                                         doc["digest"].get<std::string>() + ")");
            }
        } else {
            inst.kind = LoadedInstance::Kind::kProbing;
            inst.probing_params = parse_probing_params(doc, origin);
            if (doc.contains("digest")) {
                uint64_t expect = std::stoull(doc["digest"].get<std::string>(), nullptr, 16);
                uint64_t got = probing_digest(inst.probing_params, inst.seed);
                if (expect != got)
                    throw InvariantError(origin + ": descriptor digest mismatch (stored " +
                                         doc["digest"].get<std::string>() + ")");
            }
        }
        return inst;
    }
    throw InputError(origin + ": unknown format '" + format + "'");
}

LoadedInstance load_instance(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw InputError(path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_instance(doc, path);
}

json secretary_to_json(const XosFunction& f, const FeasibilityOracle& oracle) {
    json doc;
    doc["format"] = "secretary-instance";
    doc["version"] = 1;
    doc["n"] = f.n;
    json clauses = json::array();
    for (const auto& c : f.clauses) {
        json jc = json::array();
        for (const auto& v : c.values) jc.push_back(rat_to_json(v));
        clauses.push_back(std::move(jc));
    }
    doc["clauses"] = std::move(clauses);
    json sets = json::array();
    for (const auto& m : oracle.family.sets) {
        json js = json::array();
        for (int id : to_indices(m)) js.push_back(id);
        sets.push_back(std::move(js));
    }
    doc["maximal_sets"] = std::move(sets);
    return doc;
}

namespace {

std::string hex64(uint64_t v) {
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json descriptor_common(const char* format, uint64_t seed) {
    json doc;
    doc["format"] = format;
    doc["version"] = 1;
    doc["seed"] = seed;
    return doc;
}

}  // namespace

uint64_t prophet_digest(const ProphetParams& params, uint64_t seed) {
    uint64_t h = prf(seed, tag("prophet-digest"), static_cast<uint64_t>(params.L),
                     static_cast<uint64_t>(params.p), static_cast<uint64_t>(params.mode == HardnessMode::kDesk));
    for (long long v : params.r) h = prf(h, static_cast<uint64_t>(v));
    for (long long v : params.branching) h = prf(h, static_cast<uint64_t>(v));
    h = prf(h, static_cast<uint64_t>(params.activation.numerator()),
            static_cast<uint64_t>(params.activation.denominator()));
    if (params.mode == HardnessMode::kDesk) {
        // Sample generated coordinates so regenerated structure is checked too.
        ProphetInstance inst = gen_prophet_instance(params, seed);
        Rng rng(prf(seed, tag("prophet-digest-probe")));
        for (int i = 0; i < 64; ++i) {
            int ell = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(params.L)));
            long long node = static_cast<long long>(
                rng.below(static_cast<uint64_t>(inst.nodes_per_layer[static_cast<size_t>(ell)])));
            long long bucket = static_cast<long long>(rng.below(static_cast<uint64_t>(params.r_of(ell))));
            ProphetElement e = inst.subset_element(ell, node, bucket);
            h = prf(h, static_cast<uint64_t>(e.a), static_cast<uint64_t>(e.b));
        }
    }
    return h;
}

uint64_t probing_digest(const ProbingParams& params, uint64_t seed) {
    uint64_t h = prf(seed, tag("probing-digest"), static_cast<uint64_t>(params.L),
                     static_cast<uint64_t>(params.p), static_cast<uint64_t>(params.mode == HardnessMode::kDesk));
    for (long long v : params.arity) h = prf(h, static_cast<uint64_t>(v));
    for (long long v : params.depth) h = prf(h, static_cast<uint64_t>(v));
    h = prf(h, static_cast<uint64_t>(params.activation.numerator()),
            static_cast<uint64_t>(params.activation.denominator()));
    ProbingInstance inst = gen_probing_instance(params, seed);
    Rng rng(prf(seed, tag("probing-digest-probe")));
    long long total_depth = 0;
    for (int ell = 1; ell <= params.L; ++ell) total_depth += params.r_of(ell);
    for (int i = 0; i < 64; ++i) {
        long long depth = 1 + static_cast<long long>(rng.below(static_cast<uint64_t>(total_depth)));
        std::vector<long long> address;
        // Walk layer by layer so child indices respect each layer's arity.
        long long consumed = 0;
        for (int ell = 1; ell <= params.L && consumed < depth; ++ell) {
            for (long long hgt = 0; hgt < params.r_of(ell) && consumed < depth; ++hgt, ++consumed)
                address.push_back(
                    static_cast<long long>(rng.below(static_cast<uint64_t>(params.arity_of(ell)))));
        }
        ProbingElement e = inst.element_of_edge(address);
        h = prf(h, static_cast<uint64_t>(e.a), static_cast<uint64_t>(e.b));
    }
    return h;
}

json prophet_descriptor(const ProphetParams& params, uint64_t seed) {
    json doc = descriptor_common("prophet-descriptor", seed);
    doc["L"] = params.L;
    doc["p"] = params.p;
    doc["mode"] = params.mode == HardnessMode::kDesk ? "desk" : "paper-faithful";
    doc["r"] = params.r;
    doc["branching"] = params.branching;
    doc["activation"] = rat_to_json(params.activation);
    doc["node_cap"] = params.node_cap;
    doc["digest"] = hex64(prophet_digest(params, seed));
    return doc;
}

json probing_descriptor(const ProbingParams& params, uint64_t seed) {
    json doc = descriptor_common("probing-descriptor", seed);
    doc["L"] = params.L;
    doc["p"] = params.p;
    doc["mode"] = params.mode == HardnessMode::kDesk ? "desk" : "paper-faithful";
    doc["arity"] = params.arity;
    doc["depths"] = params.depth;
    doc["activation"] = rat_to_json(params.activation);
    doc["node_cap"] = params.node_cap;
    doc["digest"] = hex64(probing_digest(params, seed));
    return doc;
}

}  // namespace dco
