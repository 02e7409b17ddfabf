#pragma once

#include "logkg/evaluator.hpp"
#include "logkg/llm_runner.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace logkg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Settings of the run subcommand. Relative paths in a config file resolve
/// against the file's directory.
struct RunConfig {
    std::optional<std::filesystem::path> corpus;
    std::optional<std::filesystem::path> names;
    std::optional<std::filesystem::path> reference;
    std::vector<ProviderConfig> providers;
    std::optional<std::vector<Technique>> techniques;  // unset means all ten
    std::vector<MatchMode> modes;
    std::filesystem::path out_dir = "results";
    std::size_t parallelism = 1;
    std::optional<std::filesystem::path> templates;
    std::optional<std::filesystem::path> examples;
};

/// Throws DataError for unknown keys, unknown technique tags or bad values.
RunConfig load_run_config(const std::filesystem::path& path);

/// Entry point behind the logkg executable. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logkg
