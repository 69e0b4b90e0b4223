#include "swnet/instance.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "swnet/errors.hpp"
#include "swnet/lpopt.hpp"
#include "swnet/multisink.hpp"

namespace swnet {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SchemaError(what);
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  require(obj.is_object(), where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) require(ok.count(key) > 0, "unknown key '" + key + "' in " + where);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  require(it != obj.end(), "missing '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    require(fallback.has_value(), "missing '" + std::string(key) + "' in " + where);
    return *fallback;
  }
  require(it->is_number(), "'" + std::string(key) + "' in " + where + " must be a number");
  return it->get<double>();
}

std::string text(const json& value, const std::string& where) {
  require(value.is_string(), where + " must be a string");
  return value.get<std::string>();
}

std::vector<double> numbers(const json& value, const std::string& where) {
  require(value.is_array(), where + " must be an array");
  std::vector<double> out;
  for (const auto& v : value) {
    require(v.is_number(), where + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string> strings(const json& value, const std::string& where) {
  require(value.is_array(), where + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : value) out.push_back(text(v, where + " entry"));
  return out;
}

NetworkSpec parse_network(const json& doc) {
  only_keys(doc, {"nodes", "arcs", "sources", "sinks"}, "network");
  NetworkSpec spec;
  spec.nodes = strings(field(doc, "nodes", "network"), "network.nodes");
  std::set<std::string> names(spec.nodes.begin(), spec.nodes.end());
  require(names.size() == spec.nodes.size(), "network.nodes must be unique");
  auto known = [&](const std::string& n, const std::string& where) {
    require(names.count(n) > 0, where + " refers to unknown node '" + n + "'");
  };
  const auto& arcs = field(doc, "arcs", "network");
  require(arcs.is_array(), "network.arcs must be an array");
  for (const auto& a : arcs) {
    only_keys(a, {"name", "tail", "head", "capacity", "cost"}, "arc");
    ArcSpec arc;
    if (a.contains("name")) arc.name = text(a["name"], "arc.name");
    arc.tail = text(field(a, "tail", "arc"), "arc.tail");
    arc.head = text(field(a, "head", "arc"), "arc.head");
    known(arc.tail, "arc");
    known(arc.head, "arc");
    arc.capacity = number(a, "capacity", "arc");
    arc.cost = number(a, "cost", "arc", 0.0);
    require(arc.capacity >= 0.0, "arc capacities must be nonnegative");
    require(arc.cost >= 0.0, "arc costs must be nonnegative");
    spec.arcs.push_back(std::move(arc));
  }
  const auto& sources = field(doc, "sources", "network");
  require(sources.is_array() && !sources.empty(), "network.sources must be a nonempty array");
  for (const auto& s : sources) {
    only_keys(s, {"node", "cost"}, "source");
    SourceNodeSpec src;
    src.node = text(field(s, "node", "source"), "source.node");
    known(src.node, "source");
    src.cost = number(s, "cost", "source", 0.0);
    require(src.cost >= 0.0, "source costs must be nonnegative");
    spec.sources.push_back(std::move(src));
  }
  spec.sinks = strings(field(doc, "sinks", "network"), "network.sinks");
  require(!spec.sinks.empty(), "network.sinks must not be empty");
  for (const auto& t : spec.sinks) known(t, "sink");
  return spec;
}

SourceSpec parse_source(const json& doc) {
  require(doc.is_object(), "source must be an object");
  const std::string type = text(field(doc, "type", "source"), "source.type");
  SourceSpec spec;
  if (type == "bsc_pair") {
    only_keys(doc, {"type", "p"}, "source");
    spec.kind = SourceSpec::Kind::bsc_pair;
    spec.p = number(doc, "p", "source");
  } else if (type == "markov3") {
    only_keys(doc, {"type", "p", "q"}, "source");
    spec.kind = SourceSpec::Kind::markov3;
    spec.p = number(doc, "p", "source");
    spec.q = number(doc, "q", "source");
  } else if (type == "pmf") {
    only_keys(doc, {"type", "alphabet_sizes", "pmf"}, "source");
    spec.kind = SourceSpec::Kind::pmf;
    for (double v : numbers(field(doc, "alphabet_sizes", "source"), "source.alphabet_sizes")) {
      require(v >= 1 && v == static_cast<int>(v), "alphabet sizes must be positive integers");
      spec.alphabet_sizes.push_back(static_cast<int>(v));
    }
    spec.pmf = numbers(field(doc, "pmf", "source"), "source.pmf");
  } else {
    throw SchemaError("unknown source type '" + type + "'");
  }
  if (spec.kind != SourceSpec::Kind::pmf) {
    require(spec.p >= 0.0 && spec.p <= 1.0 && spec.q >= 0.0 && spec.q <= 1.0, "source parameters must lie in [0, 1]");
  }
  return spec;
}

SetFunctionSpec parse_setfunctions(const json& doc) {
  only_keys(doc, {"labels", "sigma", "rho"}, "setfunctions");
  SetFunctionSpec spec;
  spec.labels = strings(field(doc, "labels", "setfunctions"), "setfunctions.labels");
  spec.sigma = numbers(field(doc, "sigma", "setfunctions"), "setfunctions.sigma");
  spec.rho = numbers(field(doc, "rho", "setfunctions"), "setfunctions.rho");
  require(!spec.labels.empty() && spec.labels.size() <= 20, "setfunctions.labels must hold 1 to 20 labels");
  const std::size_t count = std::size_t{1} << spec.labels.size();
  require(spec.sigma.size() == count && spec.rho.size() == count, "sigma and rho need one value per subset");
  require(spec.sigma[0] == 0.0 && spec.rho[0] == 0.0, "sigma and rho must vanish on the empty set");
  return spec;
}

}  // namespace

Instance parse_instance(const json& doc) {
  only_keys(doc, {"network", "source", "setfunctions"}, "instance");
  Instance inst;
  if (doc.contains("setfunctions")) {
    require(!doc.contains("network") && !doc.contains("source"),
            "an instance holds either setfunctions or a network with a source");
    inst.setfunctions = parse_setfunctions(doc["setfunctions"]);
    to_setfunction(inst.setfunctions->labels, inst.setfunctions->sigma);
    return inst;
  }
  inst.network = parse_network(field(doc, "network", "instance"));
  inst.source = parse_source(field(doc, "source", "instance"));
  // Semantic checks: the pmf and the network must build.
  std::vector<std::string> labels;
  for (const auto& s : inst.network->sources) labels.push_back(s.node);
  to_network(*inst.network);
  to_source(*inst.source, labels);
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return parse_instance(doc);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

json emit_instance(const Instance& inst) {
  json doc = json::object();
  if (inst.setfunctions) {
    doc["setfunctions"] = {{"labels", inst.setfunctions->labels},
                           {"sigma", inst.setfunctions->sigma},
                           {"rho", inst.setfunctions->rho}};
  }
  if (inst.network) {
    json arcs = json::array();
    for (const auto& a : inst.network->arcs)
      arcs.push_back({{"name", a.name}, {"tail", a.tail}, {"head", a.head}, {"capacity", a.capacity}, {"cost", a.cost}});
    json sources = json::array();
    for (const auto& s : inst.network->sources) sources.push_back({{"node", s.node}, {"cost", s.cost}});
    doc["network"] = {{"nodes", inst.network->nodes}, {"arcs", arcs}, {"sources", sources}, {"sinks", inst.network->sinks}};
  }
  if (inst.source) {
    switch (inst.source->kind) {
      case SourceSpec::Kind::bsc_pair:
        doc["source"] = {{"type", "bsc_pair"}, {"p", inst.source->p}};
        break;
      case SourceSpec::Kind::markov3:
        doc["source"] = {{"type", "markov3"}, {"p", inst.source->p}, {"q", inst.source->q}};
        break;
      case SourceSpec::Kind::pmf:
        doc["source"] = {{"type", "pmf"}, {"alphabet_sizes", inst.source->alphabet_sizes}, {"pmf", inst.source->pmf}};
        break;
    }
  }
  return doc;
}

Network<double> to_network(const NetworkSpec& spec) {
  Network<double> net;
  try {
    for (const auto& n : spec.nodes) net.add_node(n);
    auto id = [&](const std::string& n) { return *net.find_node(n); };
    for (const auto& a : spec.arcs) net.add_arc(id(a.tail), id(a.head), a.capacity, a.cost, a.name);
    for (const auto& s : spec.sources) net.add_source(id(s.node), s.cost);
    for (const auto& t : spec.sinks) net.add_sink(id(t));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return net;
}

JointSource to_source(const SourceSpec& spec, const std::vector<std::string>& labels) {
  try {
    switch (spec.kind) {
      case SourceSpec::Kind::bsc_pair: {
        if (labels.size() != 2) throw SchemaError("bsc_pair needs exactly two sources");
        auto src = bsc_pair(spec.p);
        return JointSource(GroundSet(labels), src.alphabet_sizes(), src.pmf());
      }
      case SourceSpec::Kind::markov3: {
        if (labels.size() != 3) throw SchemaError("markov3 needs exactly three sources");
        auto src = markov3(spec.p, spec.q);
        return JointSource(GroundSet(labels), src.alphabet_sizes(), src.pmf());
      }
      case SourceSpec::Kind::pmf:
        if (spec.alphabet_sizes.size() != labels.size())
          throw SchemaError("alphabet_sizes needs one entry per network source");
        return JointSource(GroundSet(labels), spec.alphabet_sizes, spec.pmf);
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("unknown source kind");
}

SetFunction<double> to_setfunction(const std::vector<std::string>& labels, const std::vector<double>& values) {
  try {
    Vector<double> v = Eigen::Map<const Vector<double>>(values.data(), static_cast<Eigen::Index>(values.size()));
    return SetFunction<double>(GroundSet(labels), v);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

NetworkSpec describe_network(const Network<double>& net) {
  NetworkSpec spec;
  for (NodeId v = 0; v < net.node_count(); ++v) spec.nodes.push_back(net.node_name(v));
  for (const auto& a : net.arcs())
    spec.arcs.push_back({a.name, net.node_name(a.tail), net.node_name(a.head), a.capacity, a.cost});
  for (int i = 0; i < net.source_count(); ++i)
    spec.sources.push_back({net.node_name(net.source(i)), net.source_costs()[i]});
  for (NodeId t : net.sinks()) spec.sinks.push_back(net.node_name(t));
  return spec;
}

namespace {

Instance network_instance(NetworkSpec net, SourceSpec src) {
  Instance inst;
  inst.network = std::move(net);
  inst.source = std::move(src);
  return inst;
}

SourceSpec uniform_bits(int n) {
  SourceSpec s;
  s.kind = SourceSpec::Kind::pmf;
  s.alphabet_sizes.assign(n, 2);
  s.pmf.assign(std::size_t{1} << n, 1.0 / static_cast<double>(std::size_t{1} << n));
  return s;
}

NetworkSpec butterfly(bool starved) {
  NetworkSpec spec;
  spec.nodes = {"A", "B", "C", "D", "t1", "t2"};
  spec.arcs = {{"A-t1", "A", "t1", 1, 1}, {"A-C", "A", "C", 1, 1}, {"B-C", "B", "C", 1, 1},
               {"C-D", "C", "D", 1, 1},   {"D-t1", "D", "t1", 1, 1}, {"D-t2", "D", "t2", 1, 1}};
  if (!starved) spec.arcs.push_back({"B-t2", "B", "t2", 1, 1});
  spec.sources = {{"A", 0}, {"B", 0}};
  spec.sinks = {"t1", "t2"};
  return spec;
}

}  // namespace

std::vector<std::string> builtin_instance_names() {
  return {"relay-gap", "relay-nogap", "relay-imbalanced", "fig2", "butterfly", "starved", "two-sink", "geometric"};
}

Instance builtin_instance(const std::string& name, std::uint64_t seed) {
  SourceSpec bsc;
  bsc.kind = SourceSpec::Kind::bsc_pair;
  bsc.p = 0.1;
  if (name == "relay-gap") return network_instance(describe_network(relay_fixture(RelayVariant::gap).net), bsc);
  if (name == "relay-nogap") return network_instance(describe_network(relay_fixture(RelayVariant::no_gap).net), bsc);
  if (name == "relay-imbalanced")
    return network_instance(describe_network(relay_fixture(RelayVariant::imbalanced).net), bsc);
  if (name == "fig2") {
    Instance inst;
    inst.setfunctions = SetFunctionSpec{{"s1", "s2"}, {0, 2, 2, 3}, {0, 2, 2, 3}};
    return inst;
  }
  if (name == "butterfly") return network_instance(butterfly(false), uniform_bits(2));
  if (name == "starved") return network_instance(butterfly(true), uniform_bits(2));
  if (name == "two-sink") {
    NetworkSpec spec;
    spec.nodes = {"s", "m", "t1", "t2"};
    spec.arcs = {{"s-m", "s", "m", 1, 5}, {"m-t1", "m", "t1", 1, 10}, {"m-t2", "m", "t2", 1, 10},
                 {"s-t1", "s", "t1", 1, 14}, {"s-t2", "s", "t2", 1, 14}};
    spec.sources = {{"s", 0}};
    spec.sinks = {"t1", "t2"};
    return network_instance(spec, uniform_bits(1));
  }
  if (name == "geometric") {
    GeometricOptions opts;
    opts.seed = seed;
    const auto net = random_geometric_network(opts);
    // A binary chain along the source order: each source flips its predecessor
    // with probability 0.1.
    const int n = opts.sources;
    SourceSpec src;
    src.kind = SourceSpec::Kind::pmf;
    src.alphabet_sizes.assign(n, 2);
    src.pmf.resize(std::size_t{1} << n);
    for (std::size_t x = 0; x < src.pmf.size(); ++x) {
      double pr = 0.5;
      for (int i = 1; i < n; ++i) {
        const bool prev = (x >> (n - i)) & 1U;
        const bool cur = (x >> (n - 1 - i)) & 1U;
        pr *= prev == cur ? 0.9 : 0.1;
      }
      src.pmf[x] = pr;
    }
    return network_instance(describe_network(net), src);
  }
  throw SchemaError("unknown built-in instance '" + name + "'");
}

}  // namespace swnet
