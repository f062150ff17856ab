#pragma once

// Scenario files: a single JSON object, parsed completely and strictly
// before anything is computed.
//
//   chart.n                      required
//   hamiltonian, parameters      expression text and $name values
//   integrator                   method, t0, t1, step, abs_tol, rel_tol, max_steps
//   initial_conditions           list of points
//   seed, samples, radius        random sample draws in the box [-radius, radius]
//   structure, functions         bracket checks
//   vector_field                 lift checks (defaults to X_H)
//   action                       translations or generators, plus mu
//   submanifold                  constraints, or a parametrization
//   reconstruct, output.prefix

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "darboux/integrator.hpp"
#include "darboux/parser.hpp"

namespace darboux::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ActionBlock {
  std::vector<int> translations;  // pair indices, written as "x1", "x2", ... in the file
  std::vector<std::vector<std::string>> generators;
  std::vector<double> mu;
};

struct Parametrization {
  int parameters = 0;
  std::vector<std::string> components;
  double range = 1.0;  // parameter draws in [-range, range]
};

struct SubmanifoldBlock {
  std::vector<std::string> constraints;
  std::optional<Parametrization> parametrization;
};

struct ScenarioConfig {
  int n = 0;
  std::string hamiltonian;
  ParameterMap parameters;
  IntegratorSpec integrator;
  std::vector<Point> initial_conditions;
  std::uint64_t seed = 0;
  std::size_t samples = 100;
  double radius = 2.0;
  std::string structure = "contact";
  std::vector<std::string> functions;
  std::vector<std::string> vector_field;
  std::optional<ActionBlock> action;
  std::optional<SubmanifoldBlock> submanifold;
  bool reconstruct = false;
  std::string prefix = "darboux";
  std::string canonical;  // normalized JSON text used for the hash
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace darboux::cli
