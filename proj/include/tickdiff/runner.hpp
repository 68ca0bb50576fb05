// runner.hpp: config-driven experiment pipeline and its result bundle.
#pragma once

#include "tickdiff/config.hpp"
#include "tickdiff/errors.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>

namespace tickdiff {

inline constexpr const char* kToolVersion = "1.0.0";

/// A module error tagged with the pipeline stage that raised it. Keeps the
/// exit code of the original error.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause);

    int exit_code() const noexcept override { return code_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
    int code_;
};

struct ResultBundle {
    /// File name -> CSV/JSON contents. manifest.json is included.
    std::map<std::string, std::string> files;
    nlohmann::json manifest;
};

/// Resolved settings as recorded in the manifest.
nlohmann::json settings_json(const ExperimentConfig& config);

/// Runs the experiment entirely in memory.
ResultBundle run_experiment(const ExperimentConfig& config);

/// Writes every file through a staging directory; on failure nothing from
/// this bundle is left behind.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& out_dir);

} // namespace tickdiff
