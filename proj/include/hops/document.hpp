// Copyright 2026 The hops Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <string>

#include <json.hpp>

#include "hops/operator.hpp"
#include "hops/schedule.hpp"

namespace hops {

// A compiled schedule with everything needed to replay it.
//
// JSON layout: generators and shared blocks live in id tables so a block that
// occurs many times is written once. Segments are {"free": d}, {"pulse": {...}}
// or {"block": id}, each with an optional "label". Matrices are {"dim", "re",
// "im"} in row-major order; Pauli-built generators also carry their "words".
struct ScheduleDocument {
  PulseSchedule schedule;
  Operator H0;
  Operator target;
  double horizon = 0.0;
  nlohmann::json provenance = nlohmann::json::object();
};

inline constexpr const char* kDocumentFormat = "hops-schedule/1";

nlohmann::json to_json(const ScheduleDocument& doc);
ScheduleDocument document_from_json(const nlohmann::json& j);

void write_document(const ScheduleDocument& doc, const std::string& path);
ScheduleDocument read_document(const std::string& path);

}  // namespace hops
