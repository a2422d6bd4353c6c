#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "dco/constraints.hpp"
#include "dco/probing.hpp"
#include "dco/prophet.hpp"
#include "dco/xos.hpp"

namespace dco {

// Instance files are JSON. Secretary instances are explicit (clause matrix of
// num/den pairs plus a maximal-set family); prophet/probing instances persist
// only as descriptors (params + seed + structural digest).
struct LoadedInstance {
    enum class Kind { kSecretary, kProphet, kProbing };
    Kind kind = Kind::kSecretary;
    XosFunction f;
    FeasibilityOracle oracle;
    ProphetParams prophet_params;
    ProbingParams probing_params;
    uint64_t seed = 0;
};

LoadedInstance load_instance(const std::string& path);
LoadedInstance parse_instance(const nlohmann::json& doc, const std::string& origin);

nlohmann::json secretary_to_json(const XosFunction& f, const FeasibilityOracle& oracle);
nlohmann::json prophet_descriptor(const ProphetParams& params, uint64_t seed);
nlohmann::json probing_descriptor(const ProbingParams& params, uint64_t seed);

// Structural digests: a fixed sample of generated coordinates, so a regenerated
// instance can be checked against its descriptor.
uint64_t prophet_digest(const ProphetParams& params, uint64_t seed);
uint64_t probing_digest(const ProbingParams& params, uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace dco
