#pragma once

#include <string>
#include <vector>

#include "parcelfuse/config.hpp"

namespace parcelfuse {

// Restricts the config to the named sources, keeping config order.
// Throws ConfigError for names not present in the config. An empty list
// leaves the config unchanged.
RunConfig with_sources(RunConfig cfg, const std::vector<std::string>& names);

// Each command loads its inputs, runs the pipeline, writes its report
// files into the config's output directory, and returns the process exit
// code. Fatal problems surface as ConfigError (usage) or ParseError
// (input data).
int cmd_validate(const RunConfig& cfg);
int cmd_assign(const RunConfig& cfg);
int cmd_agree(const RunConfig& cfg, const std::vector<int>& classes);
int cmd_evaluate(const RunConfig& cfg);
int cmd_synth(const SynthConfig& cfg);

}  // namespace parcelfuse
