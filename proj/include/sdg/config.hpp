#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdg/adaptivity.hpp"
#include "sdg/benchmarks.hpp"

namespace sdg {

struct RunConfig {
  std::string benchmark;          // name from benchmark_names(), or empty with `problem`
  std::optional<Benchmark> problem;  // inline problem description
  std::optional<double> initial_h;   // overrides the benchmark's initial grid spacing
  AmrConfig amr;
  std::string out_dir = "out";
  bool export_mesh = false;
  bool export_fields = false;
  bool dump_system = false;
  std::uint64_t seed = 0;

  /// The benchmark to run: the inline problem or the named one.
  Benchmark resolve() const;
};

/// Parses a JSON run configuration. Unknown keys and invalid values throw
/// sdg::Error(ConfigError) with a message naming the offending key.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

}  // namespace sdg
