#ifndef KVNCPI_CLI_COMMANDS_HPP
#define KVNCPI_CLI_COMMANDS_HPP

#include <string>

#include "kvn/config.hpp"

namespace kvn::cli {

// Subcommand drivers. Each reads its sections from the config, writes
// stamped CSV/JSON/binary outputs under outdir and returns a process exit
// code: 0 = pass, 1 = a tolerance gate failed. Config problems throw
// ConfigError (mapped to exit code 2 by the CLI).
int check_superfield(const RunConfig& cfg, const std::string& outdir);
int evolve(const RunConfig& cfg, const std::string& outdir);
int simulate_cpi(const RunConfig& cfg, const std::string& outdir);
int propagate(const RunConfig& cfg, const std::string& outdir);
int duality(const RunConfig& cfg, const std::string& outdir);
int bridge(const RunConfig& cfg, const std::string& outdir);

}  // namespace kvn::cli

#endif
