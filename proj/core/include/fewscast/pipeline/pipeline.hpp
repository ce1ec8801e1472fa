#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fewscast/pipeline/config.hpp"

namespace fewscast::pipeline {

enum class Stage { Extract, Expand, Factors, Select, Fit, Ablate, Classify, Validate, Report };

std::string_view to_string(Stage stage);
/// Throws ConfigError for unknown names.
Stage parse_stage(std::string_view name);
/// Execution order.
const std::vector<Stage>& all_stages();

/// Contents of a stage's manifest.json.
struct Manifest {
    std::string stage;
    std::string status;  ///< "ok" or "failed"
    std::string error;
    int exit_code = 0;
    std::map<std::string, std::string> inputs;   ///< name -> content hash
    std::map<std::string, std::string> outputs;  ///< file name -> content hash
    std::vector<std::string> warnings;
};

/// Reads `dir/manifest.json`, or nullopt when there is none.
std::optional<Manifest> read_manifest(const std::filesystem::path& dir);

struct StageStatus {
    Stage stage = Stage::Extract;
    bool cached = false;  ///< outputs were reused
    std::vector<std::string> warnings;
};

/// Runs stages over a run directory (`config.paths.output`). Each stage writes
/// into its own subdirectory together with a manifest of input and output
/// hashes; a stage whose inputs are unchanged and whose outputs are intact is
/// skipped.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config, std::ostream* log = nullptr);

    [[nodiscard]] const PipelineConfig& config() const { return config_; }
    [[nodiscard]] std::filesystem::path stage_dir(Stage stage) const;

    /// Runs one stage. Upstream stages must have completed; the report stage
    /// instead works with whatever is present and lists the gaps.
    StageStatus run_stage(Stage stage, bool force = false);

    /// Runs every stage in order, through `until` when given.
    std::vector<StageStatus> run(std::optional<Stage> until = std::nullopt, bool force = false);

private:
    PipelineConfig config_;
    std::ostream* log_;
};

std::vector<StageStatus> run_pipeline(const PipelineConfig& config,
                                      std::optional<Stage> until = std::nullopt,
                                      std::ostream* log = nullptr);

}  // namespace fewscast::pipeline
