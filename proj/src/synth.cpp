#include "graphrom/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "graphrom/io.hpp"

namespace graphrom {

SynthRecipe parse_recipe(const std::string& name) {
    if (name == "damped-oscillator-states") return SynthRecipe::DampedOscillatorStates;
    if (name == "planted-sparse-linear") return SynthRecipe::PlantedSparseLinear;
    if (name == "microstructure-like") return SynthRecipe::MicrostructureLike;
    throw ConfigError("unknown recipe '" + name + "'");
}

std::string recipe_name(SynthRecipe recipe) {
    switch (recipe) {
        case SynthRecipe::DampedOscillatorStates: return "damped-oscillator-states";
        case SynthRecipe::PlantedSparseLinear: return "planted-sparse-linear";
        case SynthRecipe::MicrostructureLike: return "microstructure-like";
    }
    throw std::logic_error("unknown recipe");
}

void SynthSpec::validate() const {
    if (n_steps < 3) throw ConfigError("synth: n_steps must be >= 3");
    if (!(dt > 0.0)) throw ConfigError("synth: dt must be > 0");
    if (noise < 0.0 || !std::isfinite(noise)) throw ConfigError("synth: noise must be >= 0");
}

std::vector<PlantedTerm> planted_terms() {
    return {{2, 2.0}, {6, -1.5}, {10, 0.8}, {13, 1.2}, {17, -0.7}};
}

namespace {

TimeSeries damped_oscillator(const SynthSpec& spec, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = spec.n_steps;
    const double T = n * spec.dt;
    TimeSeries out;
    out.t.resize(n);
    Eigen::VectorXd x(n), v(n);
    // decaying chirp: both amplitude and frequency shrink with time
    const double omega0 = 8.0 * 2.0 * std::numbers::pi / T;
    const double decay = 1.5 / T;
    for (int k = 0; k < n; ++k) {
        const double t = k * spec.dt;
        out.t[k] = t;
        const double omega = omega0 * std::exp(-decay * t);
        const double phase = omega0 / decay * (1.0 - std::exp(-decay * t));
        const double amp = std::exp(-decay * t);
        x[k] = amp * std::cos(phase) + spec.noise * gauss(rng);
        v[k] = -amp * (decay * std::cos(phase) + omega * std::sin(phase)) +
               spec.noise * gauss(rng);
    }
    out.names = {"x", "v"};
    out.columns = {std::move(x), std::move(v)};
    return out;
}

TimeSeries planted_sparse(const SynthSpec& spec, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    const int n = spec.n_steps;
    constexpr int n_features = 20;
    const double T = n * spec.dt;

    TimeSeries out;
    out.t.resize(n);
    for (int k = 0; k < n; ++k) out.t[k] = k * spec.dt;

    // smooth, mutually distinct features: three seeded sinusoids each
    std::vector<Eigen::VectorXd> features;
    for (int c = 0; c < n_features; ++c) {
        double f1 = 1.0 + 5.0 * (uni(rng) / (2.0 * std::numbers::pi));
        double f2 = 1.0 + 5.0 * (uni(rng) / (2.0 * std::numbers::pi));
        double p1 = uni(rng), p2 = uni(rng), p3 = uni(rng);
        Eigen::VectorXd col(n);
        for (int k = 0; k < n; ++k) {
            const double t = out.t[k] / T;
            col[k] = std::sin(2.0 * std::numbers::pi * f1 * t + p1) +
                     0.5 * std::sin(2.0 * std::numbers::pi * f2 * t + p2) +
                     0.25 * std::sin(2.0 * std::numbers::pi * (f1 + f2) * t + p3);
        }
        features.push_back(std::move(col));
    }

    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (const auto& term : planted_terms()) y += term.coefficient * features[term.column];
    for (int k = 0; k < n; ++k) y[k] += spec.noise * gauss(rng);

    for (int c = 0; c < n_features; ++c) {
        char name[8];
        std::snprintf(name, sizeof name, "x%02d", c + 1);
        out.names.emplace_back(name);
        out.columns.push_back(std::move(features[c]));
    }
    out.names.emplace_back("y");
    out.columns.push_back(std::move(y));
    return out;
}

TimeSeries microstructure(const SynthSpec& spec, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = spec.n_steps;
    const double T = n * spec.dt;
    TimeSeries out;
    out.t.resize(n);
    Eigen::VectorXd phase(n), energy(n), s1(n), s2(n);
    double e = 1.0;
    for (int k = 0; k < n; ++k) {
        const double t = k * spec.dt;
        out.t[k] = t;
        const double u = t / T;
        double ph = 0.55 + 0.35 * std::exp(-1.2 * u) * std::sin(14.0 * u) +
                    spec.noise * gauss(rng);
        phase[k] = std::clamp(ph, 0.0, 1.0);
        // strictly decreasing energy: subtract a positive decaying increment
        if (k > 0) e -= (0.8 / n) * std::exp(-2.0 * u) * (1.0 + std::abs(spec.noise * gauss(rng)));
        energy[k] = e;
        s1[k] = 0.02 * std::sin(2.0 * u + 0.3) + 0.005 * u + spec.noise * 0.1 * gauss(rng);
        s2[k] = 0.015 * std::cos(1.5 * u) - 0.004 * u + spec.noise * 0.1 * gauss(rng);
    }
    out.names = {"phase", "energy", "strain_1", "strain_2"};
    out.columns = {std::move(phase), std::move(energy), std::move(s1), std::move(s2)};
    return out;
}

} // namespace

TimeSeries generate_synth(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    switch (spec.recipe) {
        case SynthRecipe::DampedOscillatorStates: return damped_oscillator(spec, rng);
        case SynthRecipe::PlantedSparseLinear: return planted_sparse(spec, rng);
        case SynthRecipe::MicrostructureLike: return microstructure(spec, rng);
    }
    throw std::logic_error("unknown recipe");
}

void write_synth_csv(const SynthSpec& spec, const std::string& path) {
    const TimeSeries series = generate_synth(spec);
    std::vector<std::string> header = {"t"};
    header.insert(header.end(), series.names.begin(), series.names.end());
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(series.length()));
    for (int k = 0; k < series.length(); ++k) {
        rows[k].push_back(series.t[k]);
        for (const auto& col : series.columns) rows[k].push_back(col[k]);
    }
    write_csv(path, header, rows);
}

} // namespace graphrom
