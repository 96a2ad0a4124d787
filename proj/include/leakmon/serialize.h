// Copyright 2026 The leakmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef _LEAKMON_SERIALIZE_H
#define _LEAKMON_SERIALIZE_H

#include "json.hpp"
#include "leakmon/errmodel.h"
#include "leakmon/readout.h"
#include "leakmon/sim.h"

namespace leakmon {

void to_json(nlohmann::json &j, const Timing &v);
void from_json(const nlohmann::json &j, Timing &v);
void to_json(nlohmann::json &j, const LeakageParams &v);
void from_json(const nlohmann::json &j, LeakageParams &v);
void to_json(nlohmann::json &j, const CoherenceParams &v);
void from_json(const nlohmann::json &j, CoherenceParams &v);
void to_json(nlohmann::json &j, const IqModel &v);
void from_json(const nlohmann::json &j, IqModel &v);
void to_json(nlohmann::json &j, const SimParams &v);
void from_json(const nlohmann::json &j, SimParams &v);
void to_json(nlohmann::json &j, const TransitionRates &v);
void from_json(const nlohmann::json &j, TransitionRates &v);

}  // namespace leakmon

#endif
