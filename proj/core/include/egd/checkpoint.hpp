//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_CHECKPOINT_HPP
#define EGD_CHECKPOINT_HPP

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "egd/evolution.hpp"

namespace egd {

nlohmann::json checkpoint_to_json(const Checkpoint &checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json &j,
                                const TypeRules &rules);

/// FNV-1a hash of a canonical JSON dump; used to bind checkpoints to the
/// resolved config they came from.
std::string config_hash(const nlohmann::json &resolved_config);

}  // namespace egd

#endif  // EGD_CHECKPOINT_HPP
