#pragma once

#include <map>
#include <string>

#include "nsbox/config.hpp"

namespace nsbox::jobs {

// Process exit codes, also recorded per run in sweep summaries.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitNoContraction = 4;
inline constexpr int kExitEmptyBlockRange = 5;

struct JobOutcome {
  int exit_code = kExitOk;
  std::string message;                         // one line; empty on success
  std::map<std::string, std::string> summary;  // key scalars for sweep CSV
};

// Runs the command named by the config key "command" and writes its artifacts
// under the "output.dir" key (default "."). Every artifact embeds the resolved
// config and the code version; identical (config, seed) runs produce
// byte-identical files. Configs that fail validation write nothing; compute
// failures write error.json and map to the exit codes above.
JobOutcome run_job(Config cfg, int parallel_jobs = 1);

}  // namespace nsbox::jobs
