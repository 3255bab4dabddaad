#pragma once

#include <string>

#include <json.hpp>

#include "mdiq/coherent.hpp"
#include "mdiq/protocol.hpp"
#include "mdiq/tomography.hpp"

namespace mdiq {

using nlohmann::json;

json to_json(const PovmPair& pair);
PovmPair povm_pair_from_json(const json& j);

/// Counts schema: {"probes": {"zero": {"trials": N, "zeros": K}, "one": ...,
/// "plus": ..., "plus_i": ...}}.
TomographyCounts counts_from_json(const json& j);
json to_json(const TomographyCounts& counts);

json to_json(const TomographyResult& result);
json to_json(const DeviationBound& bound);
json to_json(const FeasibleBox& box);
json to_json(const RateReport& report);
json to_json(const ProtocolResult& result);

json load_json_file(const std::string& path);
void write_text_file_atomic(const std::string& path, const std::string& text);

}  // namespace mdiq
