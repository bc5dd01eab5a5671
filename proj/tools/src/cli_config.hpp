#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "confham/model.hpp"

namespace confham {
namespace cli {

/// Configuration problems exit with status 2 and name the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    ModelParams model;
    std::optional<std::string> reduction_name;  // set when the model came from the catalog
    std::string task;                           // eval|integrate|verify|closure|scan|spectrum
    std::filesystem::path output = ".";
    std::uint64_t seed = 12345;
    nlohmann::json options;  // task-specific knobs (step, t_max, grids, ...)
};

/// Parses and validates one config document. Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Reads, parses and validates a config file. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cli
}  // namespace confham
