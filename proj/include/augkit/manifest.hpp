#pragma once

// JSON forms of spaces, policies, chains and draw records. Records are the
// per-line payload of manifest.jsonl.

#include <json.hpp>

#include "augkit/pipeline.hpp"
#include "augkit/policy.hpp"
#include "augkit/space.hpp"

namespace augkit {

using Json = nlohmann::ordered_json;

Json space_to_json(const AugmentationSpace& space);

Json policy_to_json(const PolicyConfig& cfg);
PolicyConfig policy_from_json(const Json& j);

Json chain_to_json(const ChainConfig& chain);
ChainConfig chain_from_json(const Json& j);

/// Flat op list: pre steps, policy ops, post steps, each tagged with "stage".
Json chain_record_to_json(const ChainRecord& record);
ChainRecord chain_record_from_json(const Json& ops);

Json aug_record_to_json(const AugRecord& record);
AugRecord aug_record_from_json(const Json& ops);

}  // namespace augkit
