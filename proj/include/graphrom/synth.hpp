#pragma once

#include <cstdint>
#include <string>

#include "graphrom/preprocessing.hpp"

namespace graphrom {

enum class SynthRecipe { DampedOscillatorStates, PlantedSparseLinear, MicrostructureLike };

SynthRecipe parse_recipe(const std::string& name);
std::string recipe_name(SynthRecipe recipe);

struct SynthSpec {
    std::uint64_t seed = 1;
    int n_steps = 200;
    double dt = 0.05;
    SynthRecipe recipe = SynthRecipe::MicrostructureLike;
    double noise = 0.0;

    void validate() const;
};

/// Deterministic synthetic time series in the ingestion schema.
///
/// damped-oscillator-states: decaying chirp (position, velocity); the peak
/// count per fixed time window decreases as the frequency decays.
/// planted-sparse-linear: 20 smooth feature columns x01..x20 and a target
/// `y` that is an exact sparse combination of five of them plus noise.
/// microstructure-like: bounded oscillatory `phase` in [0,1], a strictly
/// decreasing `energy`, and two slowly varying `strain` columns.
TimeSeries generate_synth(const SynthSpec& spec);

/// Planted ground truth for the sparse recipe: column index -> coefficient.
struct PlantedTerm {
    int column = 0;  ///< 0-based feature index (x01 is 0)
    double coefficient = 0.0;
};
std::vector<PlantedTerm> planted_terms();

void write_synth_csv(const SynthSpec& spec, const std::string& path);

} // namespace graphrom
