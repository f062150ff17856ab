#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace darboux::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> texts(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(text(e, where));
  return out;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(number(e, where));
  return out;
}

std::uint64_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(where + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

IntegratorSpec integrator(const json& j) {
  only_keys(j, "integrator", {"method", "t0", "t1", "step", "abs_tol", "rel_tol", "max_steps"});
  IntegratorSpec s;
  if (j.contains("method")) {
    try {
      s.method = method_from_string(text(j["method"], "integrator.method"));
    } catch (const darboux::Error& e) {
      throw ConfigError(std::string("integrator.method: ") + e.what());
    }
  }
  if (j.contains("t0")) s.t0 = number(j["t0"], "integrator.t0");
  if (j.contains("t1")) s.t1 = number(j["t1"], "integrator.t1");
  if (j.contains("step")) s.step = number(j["step"], "integrator.step");
  if (j.contains("abs_tol")) s.abs_tol = number(j["abs_tol"], "integrator.abs_tol");
  if (j.contains("rel_tol")) s.rel_tol = number(j["rel_tol"], "integrator.rel_tol");
  if (j.contains("max_steps")) s.max_steps = count(j["max_steps"], "integrator.max_steps");
  try {
    s.validate();
  } catch (const darboux::Error& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
  return s;
}

ActionBlock action(const json& j, int n) {
  only_keys(j, "action", {"translations", "generators", "mu"});
  ActionBlock a;
  if (j.contains("translations") == j.contains("generators"))
    throw ConfigError("action: give exactly one of 'translations' and 'generators'");
  if (j.contains("translations")) {
    for (const auto& name : texts(j["translations"], "action.translations")) {
      int slot = -1;
      if (name.size() > 1 && name[0] == 'x') {
        try {
          std::size_t used = 0;
          slot = std::stoi(name.substr(1), &used) - 1;
          if (used != name.size() - 1) slot = -1;
        } catch (const std::exception&) {
          slot = -1;
        }
      }
      if (slot < 0 || slot >= n) throw ConfigError("action.translations: '" + name + "' is not one of x1..x" + std::to_string(n));
      a.translations.push_back(slot);
    }
  } else {
    if (!j["generators"].is_array()) throw ConfigError("action.generators: expected a list of fields");
    for (const auto& g : j["generators"]) {
      a.generators.push_back(texts(g, "action.generators"));
      if (static_cast<int>(a.generators.back().size()) != 2 * n + 1)
        throw ConfigError("action.generators: each field needs " + std::to_string(2 * n + 1) + " components");
    }
  }
  const std::size_t size = a.translations.size() + a.generators.size();
  a.mu = j.contains("mu") ? numbers(j["mu"], "action.mu") : std::vector<double>(size, 0.0);
  if (a.mu.size() != size) throw ConfigError("action.mu: expected one value per generator");
  return a;
}

SubmanifoldBlock submanifold(const json& j, int n) {
  only_keys(j, "submanifold", {"constraints", "parametrization"});
  if (j.contains("constraints") == j.contains("parametrization"))
    throw ConfigError("submanifold: give exactly one of 'constraints' and 'parametrization'");
  SubmanifoldBlock s;
  if (j.contains("constraints")) {
    s.constraints = texts(j["constraints"], "submanifold.constraints");
    if (s.constraints.empty()) throw ConfigError("submanifold.constraints: empty list");
    return s;
  }
  const json& p = j["parametrization"];
  only_keys(p, "submanifold.parametrization", {"parameters", "components", "range"});
  if (!p.contains("parameters") || !p.contains("components"))
    throw ConfigError("submanifold.parametrization: 'parameters' and 'components' are required");
  Parametrization out;
  out.parameters = static_cast<int>(count(p["parameters"], "submanifold.parametrization.parameters"));
  if (out.parameters < 1) throw ConfigError("submanifold.parametrization.parameters: must be at least 1");
  out.components = texts(p["components"], "submanifold.parametrization.components");
  if (static_cast<int>(out.components.size()) != 2 * n + 1)
    throw ConfigError("submanifold.parametrization.components: expected " + std::to_string(2 * n + 1) + " entries");
  if (p.contains("range")) out.range = number(p["range"], "submanifold.parametrization.range");
  s.parametrization = out;
  return s;
}

}  // namespace

ScenarioConfig parse_config(const std::string& source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("not valid JSON: ") + e.what());
  }
  only_keys(j, "config",
            {"chart", "hamiltonian", "parameters", "integrator", "initial_conditions", "seed", "samples", "radius",
             "structure", "functions", "vector_field", "action", "submanifold", "reconstruct", "output"});
  ScenarioConfig c;
  if (!j.contains("chart")) throw ConfigError("config: 'chart' is required");
  only_keys(j["chart"], "chart", {"n"});
  if (!j["chart"].contains("n")) throw ConfigError("chart: 'n' is required");
  c.n = static_cast<int>(count(j["chart"]["n"], "chart.n"));
  if (c.n < 1) throw ConfigError("chart.n: must be at least 1");
  const int dim = 2 * c.n + 1;

  if (j.contains("hamiltonian")) c.hamiltonian = text(j["hamiltonian"], "hamiltonian");
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ConfigError("parameters: expected an object");
    for (const auto& [key, value] : j["parameters"].items()) c.parameters[key] = number(value, "parameters." + key);
  }
  if (j.contains("integrator")) c.integrator = integrator(j["integrator"]);
  if (j.contains("initial_conditions")) {
    if (!j["initial_conditions"].is_array()) throw ConfigError("initial_conditions: expected a list of points");
    for (const auto& p : j["initial_conditions"]) {
      std::vector<double> v = numbers(p, "initial_conditions");
      if (static_cast<int>(v.size()) != dim)
        throw ConfigError("initial_conditions: each point needs " + std::to_string(dim) + " coordinates");
      c.initial_conditions.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), dim));
    }
  }
  if (j.contains("seed")) c.seed = count(j["seed"], "seed");
  if (j.contains("samples")) c.samples = count(j["samples"], "samples");
  if (c.samples == 0) throw ConfigError("samples: must be positive");
  if (j.contains("radius")) c.radius = number(j["radius"], "radius");
  if (!(c.radius > 0)) throw ConfigError("radius: must be positive");
  if (j.contains("structure")) c.structure = text(j["structure"], "structure");
  if (c.structure != "contact" && c.structure != "cosymplectic")
    throw ConfigError("structure: expected 'contact' or 'cosymplectic'");
  if (j.contains("functions")) c.functions = texts(j["functions"], "functions");
  if (j.contains("vector_field")) {
    c.vector_field = texts(j["vector_field"], "vector_field");
    if (static_cast<int>(c.vector_field.size()) != dim)
      throw ConfigError("vector_field: expected " + std::to_string(dim) + " components");
  }
  if (j.contains("action")) c.action = action(j["action"], c.n);
  if (j.contains("submanifold")) c.submanifold = submanifold(j["submanifold"], c.n);
  if (j.contains("reconstruct")) {
    if (!j["reconstruct"].is_boolean()) throw ConfigError("reconstruct: expected true or false");
    c.reconstruct = j["reconstruct"].get<bool>();
  }
  if (j.contains("output")) {
    only_keys(j["output"], "output", {"prefix"});
    if (j["output"].contains("prefix")) c.prefix = text(j["output"]["prefix"], "output.prefix");
    if (c.prefix.empty() || c.prefix.find('/') != std::string::npos)
      throw ConfigError("output.prefix: expected a plain file name prefix");
  }
  c.canonical = j.dump();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace darboux::cli
