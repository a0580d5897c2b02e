#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinlab {

struct RunResult {
  std::vector<std::string> files;  // artifacts written, in order
  std::string summary;             // one human-readable line
  bool bound_violation = false;    // a verified inequality failed somewhere
};

// Executes the experiment named in a JSON config file and writes every
// artifact under the output directory. Identical configs produce
// bit-identical artifacts. The documented schema lives in the README;
// schema violations raise Config errors naming the offending key.
RunResult run_config(const std::string& config_path,
                     const std::string& out_override = "",
                     bool has_seed_override = false,
                     std::uint64_t seed_override = 0, int threads = 0);

// The same entry point for an in-memory JSON document.
RunResult run_config_text(const std::string& config_text,
                          const std::string& out_override = "",
                          bool has_seed_override = false,
                          std::uint64_t seed_override = 0, int threads = 0);

}  // namespace pinlab
