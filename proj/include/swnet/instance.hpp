#pragma once

// JSON instance documents for the command-line tool. See README for the schema.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swnet/netflow.hpp"
#include "swnet/sourcemodel.hpp"

namespace swnet {

struct ArcSpec {
  std::string name;
  std::string tail;
  std::string head;
  double capacity = 0.0;
  double cost = 0.0;
  friend bool operator==(const ArcSpec&, const ArcSpec&) = default;
};

struct SourceNodeSpec {
  std::string node;
  double cost = 0.0;
  friend bool operator==(const SourceNodeSpec&, const SourceNodeSpec&) = default;
};

struct NetworkSpec {
  std::vector<std::string> nodes;
  std::vector<ArcSpec> arcs;
  std::vector<SourceNodeSpec> sources;
  std::vector<std::string> sinks;
  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct SourceSpec {
  enum class Kind { bsc_pair, markov3, pmf };
  Kind kind = Kind::pmf;
  double p = 0.0;
  double q = 0.0;
  std::vector<int> alphabet_sizes;
  std::vector<double> pmf;
  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

struct SetFunctionSpec {
  std::vector<std::string> labels;
  std::vector<double> sigma;
  std::vector<double> rho;
  friend bool operator==(const SetFunctionSpec&, const SetFunctionSpec&) = default;
};

// Either a network with a source model, or a bare (sigma, rho) pair.
struct Instance {
  std::optional<NetworkSpec> network;
  std::optional<SourceSpec> source;
  std::optional<SetFunctionSpec> setfunctions;
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws SchemaError describing the first problem found.
Instance parse_instance(const nlohmann::json& doc);
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::string& path);
nlohmann::json emit_instance(const Instance& instance);

Network<double> to_network(const NetworkSpec& spec);
// Ground set labels are the source node names in network order.
JointSource to_source(const SourceSpec& spec, const std::vector<std::string>& labels);
SetFunction<double> to_setfunction(const std::vector<std::string>& labels, const std::vector<double>& values);

// Built-in instances: relay-gap, relay-nogap, relay-imbalanced, fig2, butterfly,
// starved, two-sink, geometric. `seed` only affects geometric.
Instance builtin_instance(const std::string& name, std::uint64_t seed = 1);
std::vector<std::string> builtin_instance_names();

NetworkSpec describe_network(const Network<double>& net);

}  // namespace swnet
