#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include <yaml-cpp/yaml.h>

#include "cocycle/simplicity.hpp"
#include "cocycle_cli/scenario.hpp"

namespace cocycle::cli {

/// Everything a block needs, built once per scenario.
struct Context {
  Scenario scenario;
  FiberMapFamily family;
  SkewProduct dyn;
  MeasureSpec spec;
  CocycleGenerator gen;
  BiSequence p;
  Homoclinic z;
  std::optional<TheoremCCertificate> certificate;
  int threads = 1;
};

/// Throws InvalidConfig or one of the generator construction errors.
Context build_context(const Scenario& s, int threads);

struct ParamDoc {
  std::string name;
  std::string default_value;  // YAML text
  std::string doc;
};

/// Block parameters with documented defaults filled in.
class Params {
 public:
  Params(const YAML::Node& given, const std::vector<ParamDoc>& docs) : given_(given), docs_(docs) {}

  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& key) const;

 private:
  YAML::Node lookup(const std::string& key) const;
  YAML::Node given_;
  const std::vector<ParamDoc>& docs_;
};

struct OpResult {
  nlohmann::ordered_json report;
  std::string csv;  // empty when the op has no tabular output
};

using OpFn = std::function<OpResult(const Context&, const Params&, std::uint64_t seed)>;

struct OpInfo {
  std::string name;
  std::string summary;
  std::vector<ParamDoc> params;
  OpFn run;
};

const std::vector<OpInfo>& op_registry();
const OpInfo* find_op(const std::string& name);

/// Rejects undocumented keys and values of the wrong shape.
void check_params(const std::string& op, const YAML::Node& params, int dim);

/// Throws UnknownOp.
std::string describe_op(const std::string& name);

}  // namespace cocycle::cli
