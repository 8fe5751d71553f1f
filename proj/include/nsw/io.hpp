// Copyright 2026 The Authors.
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

// Instance files and run reports as JSON. Field names are part of the wire
// format and must not change. Log values of -inf serialize as null.

#ifndef NSW_IO_HPP
#define NSW_IO_HPP

#include <string>

#include <json.hpp>

#include "nsw/pipeline.hpp"
#include "nsw/recombination.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

nlohmann::json report_to_json(const RunReport& report);
nlohmann::json compare_to_json(const CompareReport& report);
nlohmann::json exact_to_json(const ExactResult& result);
nlohmann::json certificate_to_json(const RecombinationCertificate& cert);
nlohmann::json extension_bound_to_json(const ExtensionBoundReport& report);

/// Canonical dump used everywhere (sorted keys, 2-space indent, newline).
std::string dump_json(const nlohmann::json& j);

void write_file(const std::string& path, const std::string& contents);

}  // namespace nsw

#endif  // NSW_IO_HPP
