#include "roar/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace roar {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(Err::InvalidSpec, path + ": " + what);
}

double num(const ordered_json& j, const std::string& path, const char* field,
           std::optional<double> fallback = std::nullopt) {
  if (!j.contains(field)) {
    if (fallback) return *fallback;
    bad(path, std::string("missing '") + field + "'");
  }
  if (!j[field].is_number())
    bad(path, std::string("'") + field + "' must be a number");
  return j[field].get<double>();
}

std::string text(const ordered_json& j, const std::string& path,
                 const char* field, std::optional<std::string> fallback = {}) {
  if (!j.contains(field)) {
    if (fallback) return *fallback;
    bad(path, std::string("missing '") + field + "'");
  }
  if (!j[field].is_string())
    bad(path, std::string("'") + field + "' must be a string");
  return j[field].get<std::string>();
}

std::uint64_t uint_field(const ordered_json& j, const std::string& path,
                         const char* field,
                         std::optional<std::uint64_t> fallback = {}) {
  if (!j.contains(field)) {
    if (fallback) return *fallback;
    bad(path, std::string("missing '") + field + "'");
  }
  if (!j[field].is_number_unsigned())
    bad(path, std::string("'") + field + "' must be a non-negative integer");
  return j[field].get<std::uint64_t>();
}

GeneratorConfig parse_generator(const ordered_json& j,
                                const std::string& path) {
  if (!j.is_object()) bad(path, "generator must be an object");
  GeneratorConfig g;
  const std::string type = text(j, path, "type");
  if (type == "gaussian") {
    g.type = GeneratorConfig::Type::Gaussian;
    g.mean = num(j, path, "mean", 0.0);
    g.stddev = num(j, path, "stddev", 1.0);
  } else if (type == "ar1") {
    g.type = GeneratorConfig::Type::Ar1;
    g.phi = num(j, path, "phi", 0.9);
    g.stddev = num(j, path, "stddev", 1.0);
    if (!(std::abs(g.phi) < 1.0)) bad(path, "ar1 phi must satisfy |phi| < 1");
  } else if (type == "linear") {
    g.type = GeneratorConfig::Type::Linear;
    g.intercept = num(j, path, "intercept", 0.0);
    g.noise_stddev = num(j, path, "noise_stddev", 0.1);
    if (!j.contains("slopes") || !j["slopes"].is_array())
      bad(path, "linear generator needs a 'slopes' array");
    for (const auto& s : j["slopes"]) g.slopes.push_back(s.get<double>());
    if (!j.contains("inputs") || !j["inputs"].is_array())
      bad(path, "linear generator needs an 'inputs' array");
    for (const auto& s : j["inputs"]) g.inputs.push_back(s.get<std::string>());
    if (g.slopes.size() != g.inputs.size())
      bad(path, "'slopes' and 'inputs' must have equal length");
  } else if (type == "constant_vector") {
    g.type = GeneratorConfig::Type::ConstantVector;
    if (!j.contains("values") || !j["values"].is_array() || j["values"].empty())
      bad(path, "constant_vector needs a non-empty 'values' array");
    for (const auto& v : j["values"]) g.values.push_back(v.get<double>());
  } else if (type == "csv") {
    g.type = GeneratorConfig::Type::Csv;
    g.csv_path = text(j, path, "path");
    g.csv_column = static_cast<std::size_t>(num(j, path, "column", 0.0));
  } else {
    bad(path, "unknown generator type '" + type + "'");
  }
  return g;
}

PrecisionModel parse_precision(const ordered_json& j, const std::string& path) {
  PrecisionModel m;
  m.baseline = num(j, path, "baseline", 1.0);
  m.rho = num(j, path, "rho", 1.0);
  return m;
}

LatencyConfig parse_latency(const ordered_json& j, const std::string& path) {
  LatencyConfig l;
  if (j.contains("latency_ms")) {
    l.ms = num(j, path, "latency_ms");
    return l;
  }
  if (!j.contains("latency")) return l;
  const auto& lat = j["latency"];
  const std::string type = text(lat, path + ".latency", "type", "constant");
  if (type == "constant")
    l.type = LatencyConfig::Type::Constant;
  else if (type == "exponential")
    l.type = LatencyConfig::Type::Exponential;
  else
    bad(path, "unknown latency type '" + type + "'");
  l.ms = num(lat, path + ".latency", "ms", 100.0);
  return l;
}

// Finds the cycle that node `start` participates in; used for diagnostics.
std::string describe_cycle(
    const std::string& start,
    const std::map<std::string, std::vector<std::string>>& edges) {
  std::vector<std::string> path{start};
  std::set<std::string> seen{start};
  std::string cur = start;
  while (true) {
    auto it = edges.find(cur);
    if (it == edges.end() || it->second.empty()) break;
    bool advanced = false;
    for (const auto& next : it->second) {
      if (next == start) {
        std::string out;
        for (const auto& n : path) out += n + " -> ";
        return out + start;
      }
      if (!seen.count(next)) {
        path.push_back(next);
        seen.insert(next);
        cur = next;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return start;
}

// Kahn topological sort; throws CyclicWiring naming a cycle.
std::vector<std::string> topo_sort(
    const std::vector<std::string>& nodes,
    const std::map<std::string, std::vector<std::string>>& deps,
    const char* what) {
  std::map<std::string, int> remaining;
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& n : nodes) remaining[n] = 0;
  for (const auto& [node, ds] : deps)
    for (const auto& d : ds) {
      remaining[node] += 1;
      dependents[d].push_back(node);
    }
  // Deterministic order: always pick the smallest ready id.
  std::set<std::string> ready;
  for (const auto& n : nodes)
    if (remaining[n] == 0) ready.insert(n);
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& m : dependents[n])
      if (--remaining[m] == 0) ready.insert(m);
  }
  if (order.size() != nodes.size()) {
    for (const auto& n : nodes)
      if (remaining[n] > 0)
        fail(Err::CyclicWiring, std::string(what) + " cycle: " +
                                    describe_cycle(n, deps));
  }
  return order;
}

}  // namespace

Scenario Scenario::from_json_text(const std::string& raw) {
  ordered_json j;
  try {
    j = ordered_json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    // Convert the byte offset into a line number for the diagnostic.
    std::size_t line = 1;
    for (std::size_t i = 0; i < raw.size() && i + 1 < e.byte; ++i)
      if (raw[i] == '\n') ++line;
    fail(Err::ParseError,
         "line " + std::to_string(line) + ": " + std::string(e.what()));
  }
  if (!j.is_object()) fail(Err::ParseError, "scenario must be a JSON object");

  Scenario sc;
  sc.seed = uint_field(j, "$", "seed", 0);
  sc.horizon = uint_field(j, "$", "horizon");
  sc.epoch_length = uint_field(j, "$", "epoch_length", 1000);

  if (j.contains("scoring")) {
    const auto& s = j["scoring"];
    const std::string variant =
        text(s, "scoring", "variant", "inverse_squared_error");
    if (variant == "inverse_squared_error")
      sc.scoring.variant = ScoringVariant::InverseSquaredError;
    else if (variant == "rank_weighted")
      sc.scoring.variant = ScoringVariant::RankWeighted;
    else
      bad("scoring", "unknown variant '" + variant + "'");
    sc.scoring.epsilon = num(s, "scoring", "epsilon", 1e-9);
    sc.scoring.rank_decay = num(s, "scoring", "rank_decay", 0.5);
  }

  if (!j.contains("streams") || !j["streams"].is_array())
    fail(Err::ParseError, "scenario needs a 'streams' array");
  std::size_t si = 0;
  for (const auto& js : j["streams"]) {
    const std::string path = "streams[" + std::to_string(si++) + "]";
    StreamConfig s;
    s.spec.stream_id = text(js, path, "id");
    s.spec.cadence_ms = static_cast<std::int64_t>(num(js, path, "cadence_ms", 2000.0));
    s.spec.deadline_ms = static_cast<std::int64_t>(num(js, path, "deadline_ms", 1500.0));
    s.spec.pot = num(js, path, "pot", 0.0);
    if (!js.contains("generator")) bad(path, "missing 'generator'");
    s.generator = parse_generator(js["generator"], path + ".generator");
    if (s.generator.type == GeneratorConfig::Type::ConstantVector)
      s.spec.value_dim = s.generator.values.size();
    if (js.contains("demand")) {
      const auto& d = js["demand"];
      const std::string type = text(d, path + ".demand", "type", "fixed");
      if (type == "fixed") {
        s.demand.type = DemandConfig::Type::Fixed;
      } else if (type == "market_maker") {
        s.demand.type = DemandConfig::Type::MarketMaker;
        s.demand.scale = num(d, path + ".demand", "scale", 1.0);
        s.demand.initial_sigma = num(d, path + ".demand", "initial_sigma", 1.0);
      } else {
        bad(path + ".demand", "unknown demand type '" + type + "'");
      }
    }
    sc.streams.push_back(std::move(s));
  }

  std::size_t ai = 0;
  if (j.contains("agents")) {
    if (!j["agents"].is_array()) fail(Err::ParseError, "'agents' must be an array");
    for (const auto& ja : j["agents"]) {
      const std::string path = "agents[" + std::to_string(ai++) + "]";
      AgentConfig a;
      a.id = text(ja, path, "id");
      const std::string type = text(ja, path, "type");
      a.latency = parse_latency(ja, path);
      if (type == "child") {
        a.type = AgentConfig::Type::Child;
        a.stream = text(ja, path, "stream");
        if (ja.contains("precision"))
          a.precision = parse_precision(ja["precision"], path + ".precision");
        if (ja.contains("advertised"))
          a.advertised = parse_precision(ja["advertised"], path + ".advertised");
      } else if (type == "parent") {
        a.type = AgentConfig::Type::Parent;
        a.stream = text(ja, path, "stream");
        if (!ja.contains("children") || !ja["children"].is_array() ||
            ja["children"].empty())
          bad(path, "parent needs a non-empty 'children' array");
        for (const auto& c : ja["children"])
          a.children.push_back(c.get<std::string>());
        if (ja.contains("budget")) {
          const auto& b = ja["budget"];
          const std::string mode = text(b, path + ".budget", "mode");
          if (mode == "income_fraction") {
            a.budget_mode = AgentConfig::BudgetMode::IncomeFraction;
            a.budget_fraction = num(b, path + ".budget", "fraction", 1.0);
          } else if (mode == "fixed_per_round") {
            a.budget_mode = AgentConfig::BudgetMode::FixedPerRound;
            a.budget_amount = num(b, path + ".budget", "amount");
          } else {
            bad(path + ".budget", "unknown budget mode '" + mode + "'");
          }
        }
        if (ja.contains("learn_rho")) a.learn_rho = ja["learn_rho"].get<bool>();
      } else if (type == "stacker") {
        a.type = AgentConfig::Type::Stacker;
        a.stream = text(ja, path, "stream");
        a.helper = text(ja, path, "helper", "");
        a.bias = num(ja, path, "bias", 0.0);
        a.noise_stddev = num(ja, path, "noise_stddev", 0.0);
        a.helper_pot = num(ja, path, "helper_pot", 0.0);
      } else if (type == "error_helper") {
        a.type = AgentConfig::Type::ErrorHelper;
      } else if (type == "matching_pursuit") {
        a.type = AgentConfig::Type::MatchingPursuit;
        a.stream = text(ja, path, "stream");
        a.depth = static_cast<std::size_t>(num(ja, path, "depth"));
        if (ja.contains("atoms")) {
          for (const auto& atom : ja["atoms"]) {
            Value v;
            for (const auto& x : atom) v.push_back(x.get<double>());
            a.atoms.push_back(std::move(v));
          }
        } else {
          a.random_atoms =
              static_cast<std::size_t>(num(ja, path, "random_atoms"));
        }
      } else if (type == "external") {
        a.type = AgentConfig::Type::External;
        a.stream = text(ja, path, "stream");
        a.key = text(ja, path, "key", "");
      } else {
        bad(path, "unknown agent type '" + type + "'");
      }
      sc.agents.push_back(std::move(a));
    }
  }

  sc.validate();
  return sc;
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario sc = from_json_text(buf.str());
  // CSV generator paths are relative to the scenario file.
  const auto dir = std::filesystem::path(path).parent_path();
  for (auto& s : sc.streams)
    if (s.generator.type == GeneratorConfig::Type::Csv &&
        !s.generator.csv_path.empty() &&
        std::filesystem::path(s.generator.csv_path).is_relative())
      s.generator.csv_path = (dir / s.generator.csv_path).string();
  return sc;
}

void Scenario::validate() const {
  if (horizon == 0) fail(Err::InvalidSpec, "horizon must be >= 1");
  if (epoch_length == 0) fail(Err::InvalidSpec, "epoch_length must be >= 1");
  scoring.validate();
  if (streams.empty()) fail(Err::InvalidSpec, "scenario has no streams");

  std::set<std::string> stream_ids;
  std::int64_t cadence = streams.front().spec.cadence_ms;
  for (const auto& s : streams) {
    s.spec.validate();
    if (!stream_ids.insert(s.spec.stream_id).second)
      fail(Err::InvalidSpec, "duplicate stream id '" + s.spec.stream_id + "'");
    if (s.spec.cadence_ms != cadence)
      fail(Err::InvalidSpec,
           "all streams must share one cadence; '" + s.spec.stream_id +
               "' differs");
    if (s.generator.type == GeneratorConfig::Type::Linear) {
      for (const auto& in : s.generator.inputs)
        if (in == s.spec.stream_id)
          fail(Err::CyclicWiring, "generator cycle: " + in + " -> " + in);
    }
  }
  for (const auto& s : streams)
    if (s.generator.type == GeneratorConfig::Type::Linear)
      for (const auto& in : s.generator.inputs)
        if (!stream_ids.count(in))
          fail(Err::InvalidSpec, "stream '" + s.spec.stream_id +
                                     "' uses unknown input '" + in + "'");
  stream_topo_order();  // throws CyclicWiring on generator cycles

  std::set<std::string> agent_ids;
  for (const auto& a : agents) {
    if (a.id.empty()) fail(Err::InvalidSpec, "agent id must be non-empty");
    if (!agent_ids.insert(a.id).second)
      fail(Err::InvalidSpec, "duplicate agent id '" + a.id + "'");
    if (!a.stream.empty() && !stream_ids.count(a.stream))
      fail(Err::UnknownStream,
           "agent '" + a.id + "' produces unknown stream '" + a.stream + "'");
    if (!(a.latency.ms >= 0.0))
      fail(Err::InvalidSpec, "agent '" + a.id + "' has negative latency");
  }

  for (const auto& a : agents) {
    switch (a.type) {
      case AgentConfig::Type::Child:
        a.precision.validate();
        if (a.advertised) a.advertised->validate();
        break;
      case AgentConfig::Type::Parent: {
        if (a.budget_mode == AgentConfig::BudgetMode::IncomeFraction &&
            !(a.budget_fraction >= 0.0))
          fail(Err::InvalidSpec, "budget fraction must be >= 0");
        if (a.budget_mode == AgentConfig::BudgetMode::FixedPerRound &&
            !(a.budget_amount >= 0.0))
          fail(Err::NegativeBudget, "fixed budget must be >= 0");
        std::set<std::string> seen;
        for (const auto& c : a.children) {
          if (!seen.insert(c).second)
            fail(Err::InvalidSpec, "parent '" + a.id + "' lists child '" + c +
                                       "' twice");
          const AgentConfig* child = find_agent(c);
          if (!child)
            fail(Err::InvalidSpec,
                 "parent '" + a.id + "' references unknown child '" + c + "'");
          if (child->stream.empty())
            fail(Err::InvalidSpec, "child '" + c + "' produces no stream");
        }
        break;
      }
      case AgentConfig::Type::Stacker: {
        if (!a.helper.empty()) {
          const AgentConfig* h = find_agent(a.helper);
          if (!h)
            fail(Err::InvalidSpec, "stacker '" + a.id +
                                       "' references unknown helper '" +
                                       a.helper + "'");
          if (h->type != AgentConfig::Type::ErrorHelper)
            fail(Err::InvalidSpec,
                 "helper '" + a.helper + "' is not an error_helper");
          // The stacker's error stream reveals one tick after the target
          // stream; both must fit inside the cadence.
          const StreamConfig* target = find_stream(a.stream);
          if (target && target->spec.deadline_ms + 1 >= target->spec.cadence_ms)
            fail(Err::InvalidSpec,
                 "stream '" + a.stream +
                     "' leaves no room for the stacker error round "
                     "(needs deadline + 1 < cadence)");
          if (!(a.helper_pot >= 0.0))
            fail(Err::InvalidSpec, "helper_pot must be >= 0");
        }
        if (!(a.noise_stddev >= 0.0))
          fail(Err::InvalidSpec, "stacker noise_stddev must be >= 0");
        break;
      }
      case AgentConfig::Type::ErrorHelper:
        break;
      case AgentConfig::Type::MatchingPursuit: {
        if (a.depth == 0)
          fail(Err::InvalidSpec, "matching pursuit depth must be >= 1");
        const StreamConfig* s = find_stream(a.stream);
        if (s) {
          const std::size_t dim = s->spec.value_dim;
          if (!a.atoms.empty()) {
            for (const auto& atom : a.atoms)
              if (atom.size() != dim)
                fail(Err::DimensionMismatch,
                     "atom dimension != stream dimension for '" + a.id + "'");
          } else if (a.random_atoms == 0) {
            fail(Err::InvalidSpec,
                 "matching pursuit '" + a.id + "' needs atoms or random_atoms");
          }
        }
        break;
      }
      case AgentConfig::Type::External:
        break;
    }
  }

  agent_topo_order();  // throws CyclicWiring on within-round agent cycles
}

std::vector<std::size_t> Scenario::stream_topo_order() const {
  std::vector<std::string> nodes;
  std::map<std::string, std::vector<std::string>> deps;
  for (const auto& s : streams) {
    nodes.push_back(s.spec.stream_id);
    if (s.generator.type == GeneratorConfig::Type::Linear)
      deps[s.spec.stream_id] = s.generator.inputs;
  }
  auto order = topo_sort(nodes, deps, "generator");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < streams.size(); ++i)
    index[streams[i].spec.stream_id] = i;
  std::vector<std::size_t> out;
  for (const auto& id : order) out.push_back(index[id]);
  return out;
}

std::vector<std::size_t> Scenario::agent_topo_order() const {
  std::vector<std::string> nodes;
  std::map<std::string, std::vector<std::string>> deps;
  std::map<std::string, std::vector<std::string>> producers;  // stream -> agents
  for (const auto& a : agents) {
    nodes.push_back(a.id);
    if (!a.stream.empty()) producers[a.stream].push_back(a.id);
  }
  for (const auto& a : agents) {
    if (a.type == AgentConfig::Type::Parent) {
      // A parent answers after the producers of its input streams.
      for (const auto& c : a.children) {
        const AgentConfig* child = find_agent(c);
        if (child) deps[a.id].push_back(child->id);
      }
    } else if (a.type == AgentConfig::Type::Stacker && !a.helper.empty()) {
      deps[a.id].push_back(a.helper);
    }
  }
  auto order = topo_sort(nodes, deps, "within-round");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < agents.size(); ++i) index[agents[i].id] = i;
  std::vector<std::size_t> out;
  for (const auto& id : order) out.push_back(index[id]);
  return out;
}

const StreamConfig* Scenario::find_stream(const std::string& id) const {
  for (const auto& s : streams)
    if (s.spec.stream_id == id) return &s;
  return nullptr;
}

const AgentConfig* Scenario::find_agent(const std::string& id) const {
  for (const auto& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

std::string Scenario::to_json_text() const {
  ordered_json j;
  j["seed"] = seed;
  j["horizon"] = horizon;
  j["epoch_length"] = epoch_length;
  ordered_json sj;
  sj["variant"] = scoring.variant == ScoringVariant::InverseSquaredError
                      ? "inverse_squared_error"
                      : "rank_weighted";
  sj["epsilon"] = scoring.epsilon;
  sj["rank_decay"] = scoring.rank_decay;
  j["scoring"] = sj;

  j["streams"] = ordered_json::array();
  for (const auto& s : streams) {
    ordered_json js;
    js["id"] = s.spec.stream_id;
    js["cadence_ms"] = s.spec.cadence_ms;
    js["deadline_ms"] = s.spec.deadline_ms;
    js["pot"] = s.spec.pot;
    ordered_json g;
    switch (s.generator.type) {
      case GeneratorConfig::Type::Gaussian:
        g["type"] = "gaussian";
        g["mean"] = s.generator.mean;
        g["stddev"] = s.generator.stddev;
        break;
      case GeneratorConfig::Type::Ar1:
        g["type"] = "ar1";
        g["phi"] = s.generator.phi;
        g["stddev"] = s.generator.stddev;
        break;
      case GeneratorConfig::Type::Linear:
        g["type"] = "linear";
        g["intercept"] = s.generator.intercept;
        g["slopes"] = s.generator.slopes;
        g["inputs"] = s.generator.inputs;
        g["noise_stddev"] = s.generator.noise_stddev;
        break;
      case GeneratorConfig::Type::ConstantVector:
        g["type"] = "constant_vector";
        g["values"] = s.generator.values;
        break;
      case GeneratorConfig::Type::Csv:
        g["type"] = "csv";
        g["path"] = s.generator.csv_path;
        g["column"] = s.generator.csv_column;
        break;
    }
    js["generator"] = g;
    if (s.demand.type == DemandConfig::Type::MarketMaker) {
      ordered_json d;
      d["type"] = "market_maker";
      d["scale"] = s.demand.scale;
      d["initial_sigma"] = s.demand.initial_sigma;
      js["demand"] = d;
    }
    j["streams"].push_back(js);
  }

  j["agents"] = ordered_json::array();
  for (const auto& a : agents) {
    ordered_json ja;
    ja["id"] = a.id;
    switch (a.type) {
      case AgentConfig::Type::Child: {
        ja["type"] = "child";
        ja["stream"] = a.stream;
        ordered_json p;
        p["baseline"] = a.precision.baseline;
        p["rho"] = a.precision.rho;
        ja["precision"] = p;
        if (a.advertised) {
          ordered_json q;
          q["baseline"] = a.advertised->baseline;
          q["rho"] = a.advertised->rho;
          ja["advertised"] = q;
        }
        break;
      }
      case AgentConfig::Type::Parent: {
        ja["type"] = "parent";
        ja["stream"] = a.stream;
        ja["children"] = a.children;
        ordered_json b;
        if (a.budget_mode == AgentConfig::BudgetMode::IncomeFraction) {
          b["mode"] = "income_fraction";
          b["fraction"] = a.budget_fraction;
        } else {
          b["mode"] = "fixed_per_round";
          b["amount"] = a.budget_amount;
        }
        ja["budget"] = b;
        if (a.learn_rho) ja["learn_rho"] = true;
        break;
      }
      case AgentConfig::Type::Stacker:
        ja["type"] = "stacker";
        ja["stream"] = a.stream;
        if (!a.helper.empty()) ja["helper"] = a.helper;
        ja["bias"] = a.bias;
        ja["noise_stddev"] = a.noise_stddev;
        if (a.helper_pot != 0.0) ja["helper_pot"] = a.helper_pot;
        break;
      case AgentConfig::Type::ErrorHelper:
        ja["type"] = "error_helper";
        break;
      case AgentConfig::Type::MatchingPursuit:
        ja["type"] = "matching_pursuit";
        ja["stream"] = a.stream;
        ja["depth"] = a.depth;
        if (!a.atoms.empty())
          ja["atoms"] = a.atoms;
        else
          ja["random_atoms"] = a.random_atoms;
        break;
      case AgentConfig::Type::External:
        ja["type"] = "external";
        ja["stream"] = a.stream;
        if (!a.key.empty()) ja["key"] = a.key;
        break;
    }
    if (a.latency.type == LatencyConfig::Type::Constant) {
      ja["latency_ms"] = a.latency.ms;
    } else {
      ordered_json l;
      l["type"] = "exponential";
      l["ms"] = a.latency.ms;
      ja["latency"] = l;
    }
    j["agents"].push_back(ja);
  }
  return j.dump(2);
}

}  // namespace roar
