#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "cocycle/linalg.hpp"
#include "cocycle/symbolic.hpp"

namespace cocycle::cli {

struct FiberSpec {
  std::string kind = "rotation";  // rotation | perturbed_rotation
  int window = 0;
  std::vector<double> angles;
  double amplitude = 0.0;
};

struct CocycleSpec {
  /// constant | diagonal | bump | theoremC
  std::string kind = "diagonal";
  std::vector<Complex> tau;  // diagonal, bump base (when matrix is empty), theoremC
  Matrix matrix;             // constant, bump base
  Matrix r;                  // bump, theoremC
  Matrix r_sin;              // bump only
  double radius = 0.3;
  double exponent = 1.0;
  double tol_margin = 1e-6;
  int relation_bound = 6;
};

struct Block {
  std::string name;
  std::string op;
  std::uint64_t seed = 1;
  YAML::Node params;  // map, possibly empty
};

struct Scenario {
  std::string name;
  int alphabet = 2;
  std::vector<double> weights;       // Bernoulli weights, defaults to uniform
  std::vector<double> fiber_density; // empty: Lebesgue
  double kappa = 1.0;
  FiberSpec fiber;
  CocycleSpec cocycle;
  Symbol fixed_point = 0;
  Word homoclinic_core{1};
  std::vector<Block> blocks;
};

/// Throws Error(InvalidConfig) on malformed input or failed validation.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

/// Referenced symbols inside the alphabet, consistent dimensions, unique
/// block names.
void validate_scenario(const Scenario& s);

}  // namespace cocycle::cli
