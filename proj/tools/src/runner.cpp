#include "cocycle_cli/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cocycle/error.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/random.hpp"
#include "cocycle_cli/ops.hpp"

namespace cocycle::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Write to a sibling temporary and rename so readers never see partial files.
void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidConfig, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) fail(ErrorKind::InvalidConfig, "cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

int write_error(const fs::path& dir, const std::string& kind, const std::string& message,
                const std::string& block, int code) {
  json j{{"kind", kind}, {"message", message}, {"block", block.empty() ? json(nullptr) : json(block)},
         {"exit_code", code}};
  try {
    fs::create_directories(dir);
    write_atomic(dir / "error.json", j.dump(2) + "\n");
  } catch (const std::exception&) {
    // the exit code still reports the failure
  }
  return code;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COCYCLE_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 1;
}

int run_scenario(const Scenario& s, const std::string& out_dir, const RunOptions& opts) {
  const fs::path dir(out_dir);
  std::string current;
  try {
    fs::create_directories(dir);
    fs::remove(dir / "error.json");
    const int threads = resolve_threads(opts.threads);
    set_default_threads(threads);
    const Context ctx = build_context(s, threads);
    for (const auto& b : s.blocks) {
      current = b.name;
      const OpInfo* info = find_op(b.op);
      if (!info) fail(ErrorKind::UnknownOp, "unknown op '" + b.op + "'");
      const std::uint64_t seed = opts.seed_override ? hash_pair(*opts.seed_override, b.seed) : b.seed;
      const Params params(b.params, info->params);
      OpResult r = info->run(ctx, params, seed);
      json j{{"block", b.name}, {"op", b.op}, {"seed", seed}};
      for (auto& [k, v] : r.report.items()) j[k] = v;
      write_atomic(dir / (b.name + ".json"), j.dump(2) + "\n");
      if (!r.csv.empty()) write_atomic(dir / (b.name + ".csv"), r.csv);
    }
  } catch (const Error& e) {
    const int code = is_numerical(e.kind()) ? kExitNumerical : kExitValidation;
    return write_error(dir, std::string(to_string(e.kind())), e.what(), current, code);
  } catch (const fs::filesystem_error& e) {
    return write_error(dir, "InvalidConfig", e.what(), current, kExitValidation);
  } catch (const std::exception& e) {
    return write_error(dir, "Internal", e.what(), current, kExitNumerical);
  }
  return kExitOk;
}

int run_config(const std::string& config, const std::string& out_dir, const RunOptions& opts) {
  Scenario s;
  try {
    if (fs::exists(config)) {
      s = load_scenario(config);
    } else {
      const BuiltinScenario* found = nullptr;
      for (const auto& b : builtin_scenarios())
        if (b.name == config) found = &b;
      if (!found) fail(ErrorKind::InvalidConfig, "no config file or built-in scenario named '" + config + "'");
      s = parse_scenario(found->text);
    }
  } catch (const Error& e) {
    return write_error(out_dir, std::string(to_string(e.kind())), e.what(), "", kExitValidation);
  }
  return run_scenario(s, out_dir, opts);
}

std::string list_scenarios() {
  std::ostringstream out;
  for (const auto& b : builtin_scenarios()) out << b.name << "\t" << b.summary << "\n";
  return out.str();
}

}  // namespace cocycle::cli
