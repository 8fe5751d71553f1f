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

#include "nsw/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace nsw {

using nlohmann::json;

namespace {

json log_to_json(double v) {
  if (std::isinf(v) && v < 0) return nullptr;
  return v;
}

json params_to_json(const ValuationOracle& oracle) {
  json p;
  switch (oracle.family()) {
    case Family::additive:
      p["weights"] = oracle.as_additive()->weights;
      break;
    case Family::coverage:
      p["element_weights"] = oracle.as_coverage()->element_weights;
      p["incidence"] = oracle.as_coverage()->incidence;
      break;
    case Family::budget_additive:
      p["weights"] = oracle.as_budget_additive()->weights;
      p["cap"] = oracle.as_budget_additive()->cap;
      break;
    case Family::partition_matroid_rank:
      p["blocks"] = oracle.as_partition_rank()->blocks;
      p["capacities"] = oracle.as_partition_rank()->capacities;
      break;
    case Family::explicit_table:
      if (oracle.ground_size() != oracle.base_ground()) {
        throw InvalidInput("extended explicit_table oracle cannot be serialized");
      }
      p["table"] = oracle.as_explicit_table()->table;
      break;
  }
  return p;
}

ValuationOracle oracle_from_json(const json& agent, int m) {
  if (!agent.contains("family") || !agent.contains("params")) {
    throw InvalidInput("agent entry needs 'family' and 'params'");
  }
  const Family family = family_from_name(agent.at("family").get<std::string>());
  const json& p = agent.at("params");
  switch (family) {
    case Family::additive: {
      auto weights = p.at("weights").get<std::vector<double>>();
      if (static_cast<int>(weights.size()) != m) {
        throw InvalidInput("field 'weights' must have length m");
      }
      return ValuationOracle::additive(std::move(weights));
    }
    case Family::coverage: {
      auto ew = p.at("element_weights").get<std::vector<double>>();
      auto inc = p.at("incidence").get<std::vector<std::vector<int>>>();
      if (static_cast<int>(inc.size()) != m) {
        throw InvalidInput("field 'incidence' must have length m");
      }
      return ValuationOracle::coverage(std::move(ew), std::move(inc));
    }
    case Family::budget_additive: {
      auto weights = p.at("weights").get<std::vector<double>>();
      if (static_cast<int>(weights.size()) != m) {
        throw InvalidInput("field 'weights' must have length m");
      }
      return ValuationOracle::budget_additive(std::move(weights), p.at("cap").get<double>());
    }
    case Family::partition_matroid_rank: {
      auto blocks = p.at("blocks").get<std::vector<std::vector<int>>>();
      auto caps = p.at("capacities").get<std::vector<int>>();
      return ValuationOracle::partition_rank(m, std::move(blocks), std::move(caps));
    }
    case Family::explicit_table: {
      auto table = p.at("table").get<std::vector<double>>();
      if (table.size() != (1ull << m)) {
        throw InvalidInput("field 'table' must have length 2^m, expected " +
                           std::to_string(1ull << m) + " entries");
      }
      return ValuationOracle::explicit_table(std::move(table));
    }
  }
  throw InvalidInput("unknown family");
}

json itemset_to_json(const ItemSet& s) { return s.indices(); }

json matching_to_json(const Matching& matching) { return matching.to_item; }

// Z entries follow the 0 = unassigned, i+1 = agent i convention.
json z_to_json(const std::vector<int>& z) {
  json out = json::array();
  for (int v : z) out.push_back(v + 1);
  return out;
}

json allocation_to_json(const std::vector<ItemSet>& allocation) {
  json out = json::array();
  for (const auto& bundle : allocation) out.push_back(bundle.indices());
  return out;
}

json matrix_to_json(const FractionalAllocation& y) {
  json out = json::array();
  for (int i = 0; i < y.agents; ++i) {
    json row = json::array();
    for (int j = 0; j < y.items; ++j) row.push_back(y.at(i, j));
    out.push_back(row);
  }
  return out;
}

}  // namespace

json instance_to_json(const Instance& instance) {
  json j;
  j["n"] = instance.n;
  j["m"] = instance.m;
  json agents = json::array();
  for (const auto& oracle : instance.oracles) {
    json agent;
    agent["family"] = family_name(oracle.family());
    agent["params"] = params_to_json(oracle);
    agents.push_back(std::move(agent));
  }
  j["agents"] = std::move(agents);
  if (!instance.agent_labels.empty() || !instance.item_labels.empty()) {
    json labels;
    if (!instance.agent_labels.empty()) labels["agents"] = instance.agent_labels;
    if (!instance.item_labels.empty()) labels["items"] = instance.item_labels;
    j["labels"] = std::move(labels);
  }
  if (!instance.meta.generator.empty() || instance.meta.seed != 0) {
    j["metadata"] = {{"generator", instance.meta.generator}, {"seed", instance.meta.seed}};
  }
  return j;
}

Instance instance_from_json(const json& j) {
  Instance instance;
  try {
    instance.n = j.at("n").get<int>();
    instance.m = j.at("m").get<int>();
    const json& agents = j.at("agents");
    if (!agents.is_array() || static_cast<int>(agents.size()) != instance.n) {
      throw InvalidInput("field 'agents' must be an array of length n");
    }
    for (const auto& agent : agents) {
      instance.oracles.push_back(oracle_from_json(agent, instance.m));
    }
    if (j.contains("labels")) {
      const json& labels = j.at("labels");
      if (labels.contains("agents")) instance.agent_labels = labels.at("agents").get<std::vector<std::string>>();
      if (labels.contains("items")) instance.item_labels = labels.at("items").get<std::vector<std::string>>();
    }
    if (j.contains("metadata")) {
      const json& meta = j.at("metadata");
      if (meta.contains("generator")) instance.meta.generator = meta.at("generator").get<std::string>();
      if (meta.contains("seed")) instance.meta.seed = meta.at("seed").get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed instance: ") + e.what());
  }
  instance.validate();
  return instance;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("instance parse error in ") + path + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const Instance& instance, const std::string& path) {
  write_file(path, dump_json(instance_to_json(instance)));
}

json report_to_json(const RunReport& report) {
  json j;
  j["instance_meta"] = {{"n", report.n},
                        {"m", report.m},
                        {"generator", report.meta.generator},
                        {"seed", report.meta.seed}};
  j["tau"] = matching_to_json(report.tau);
  j["H"] = itemset_to_json(report.h);
  j["A_prime"] = report.a_prime;
  j["opt_zero"] = report.opt_zero;
  json trace;
  trace["iterations"] = report.greedy_trace.iterations;
  trace["avg_log_per_iteration"] = report.greedy_trace.avg_log_per_iteration;
  trace["y"] = matrix_to_json(report.y);
  j["greedy_trace"] = std::move(trace);
  json trials = json::array();
  for (const auto& trial : report.trials) {
    trials.push_back({{"Z", z_to_json(trial.z)},
                      {"sigma", matching_to_json(trial.sigma)},
                      {"log_nsw", log_to_json(trial.log_nsw)}});
  }
  j["trials"] = std::move(trials);
  j["best"] = {{"trial", report.best_trial},
               {"allocation", allocation_to_json(report.best_allocation)},
               {"log_nsw", log_to_json(report.best_log_nsw)}};
  j["discarded"] = report.discarded_items;
  if (report.opt_log_nsw) j["exact"] = {{"opt_log_nsw", log_to_json(*report.opt_log_nsw)}};
  if (report.ratio && j.contains("exact")) j["exact"]["ratio"] = *report.ratio;
  j["timing"] = {{"wall_seconds", report.wall_seconds}};
  return j;
}

json exact_to_json(const ExactResult& result) {
  json j;
  j["assignment"] = result.assignment;
  j["allocation"] = allocation_to_json(result.allocation);
  j["log_nsw"] = log_to_json(result.log_nsw);
  j["nsw"] = result.nsw;
  j["enumerated"] = result.enumerated;
  return j;
}

json compare_to_json(const CompareReport& report) {
  // One flat report object; the exact? and certificates? keys are optional.
  json j = report_to_json(report.run);
  if (report.exact) {
    j["exact"]["opt_log_nsw"] = log_to_json(report.exact->log_nsw);
    if (report.run.ratio) j["exact"]["ratio"] = *report.run.ratio;
    j["exact"]["allocation"] = allocation_to_json(report.exact->allocation);
  }
  json certificates;
  certificates["factor_ok"] = report.ratio_ok;
  if (report.certificate) {
    certificates["relaxation_ratio_sum"] = report.certificate->ratio_sum;
    certificates["relaxation_ratio_ok"] = report.certificate->ratio_ok;
    certificates["iterations"] = report.certificate->iterations;
    certificates["iterations_ok"] = report.certificate->iterations_ok;
  }
  j["certificates"] = std::move(certificates);
  return j;
}

json certificate_to_json(const RecombinationCertificate& cert) {
  json j;
  j["nsw_ratio_ok"] = cert.nsw_ratio_ok;
  j["log_nsw_rho"] = log_to_json(cert.log_nsw_rho);
  j["log_nsw_pi"] = log_to_json(cert.log_nsw_pi);
  j["log_nsw_pi_prime"] = log_to_json(cert.log_nsw_pi_prime);
  j["phi_product_log"] = cert.phi_product_log;
  json cases = json::array();
  for (AgentCase c : cert.per_agent) {
    cases.push_back(c == AgentCase::matched_item_large ? "i"
                                                       : (c == AgentCase::no_large_items ? "ii" : "violation"));
  }
  j["per_agent_case"] = std::move(cases);
  j["all_ok"] = cert.all_ok();
  if (cert.violating_agent) j["violating_agent"] = *cert.violating_agent;
  return j;
}

json extension_bound_to_json(const ExtensionBoundReport& report) {
  json j;
  j["beta"] = report.beta;
  j["pi"] = matching_to_json(report.pi);
  j["log_nsw_pi"] = log_to_json(report.log_nsw_pi);
  j["opt_log_nsw"] = log_to_json(report.opt_log_nsw);
  j["bound_ok"] = report.bound_ok;
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << contents;
}

}  // namespace nsw
