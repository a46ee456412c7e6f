#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "graphrom/io.hpp"
#include "graphrom/operator_basis.hpp"
#include "graphrom/regression.hpp"
#include "graphrom/weight_kernels.hpp"

namespace graphrom {

enum class ModelKind { Dynamics, Taylor };

/// Parsed and validated run configuration. Validation failures raise
/// ConfigError naming the offending field path (e.g. "model.kind").
struct RunConfig {
    nlohmann::ordered_json raw;  ///< echoed verbatim into model.json

    std::string input_path;
    InputFormat input_format = InputFormat::Csv;

    std::string time_column = "t";
    std::vector<std::string> state_columns;
    std::vector<std::string> observable_columns;
    std::string target_column;       ///< direct target, or
    std::string target_derivative_of;  ///< backward-difference target source

    // preprocess
    int filter_window = 0;  ///< 0 disables smoothing
    double filter_sigma = 1.0;
    int filter_passes = 1;

    WeightSpec weight;

    ModelKind model_kind = ModelKind::Dynamics;
    // dynamics
    std::vector<std::string> polynomial_variables;
    std::string derivative_function;
    std::string chem_component;
    std::vector<std::string> strain_components;
    std::vector<std::string> special_columns;
    int degree_cap = 3;
    bool symmetric_pairs = true;
    // taylor
    int taylor_order = 4;
    std::string taylor_function;
    int taylor_base_index = 0;

    SolverSpec solver;
    LossSpec loss;

    StepwiseStop stop;
    std::vector<int> checkpoints;  ///< retained-term counts snapshotted in fit.csv

    std::string output_dir = ".";
    bool emit_svg = false;

    static RunConfig parse(const nlohmann::ordered_json& j);
    static RunConfig parse_file(const std::string& path);
};

struct PipelineResult {
    StepwiseTrace trace;
    std::vector<std::string> warnings;
};

/// Full batch run: ingest, preprocess, graph, basis, stepwise fit, artifact
/// emission (model.json, trace.csv, fit.csv, weights_diag.csv) into the
/// configured output directory. Deterministic for fixed config and input.
PipelineResult run_pipeline(const RunConfig& cfg);

// exit codes shared by the CLI
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitAssertFailure = 4;

} // namespace graphrom
