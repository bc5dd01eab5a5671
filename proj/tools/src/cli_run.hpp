#pragma once

#include <ostream>

#include "cli_config.hpp"

namespace confham {
namespace cli {

/// Executes one task. Returns the process exit status: 0 success,
/// 1 domain/integration failure (message on err). Config errors throw
/// ConfigError (mapped to status 2 by the caller).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace cli
}  // namespace confham
