#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "graphrom/error_lab.hpp"
#include "graphrom/io.hpp"
#include "graphrom/nonlocal_calculus.hpp"
#include "graphrom/pipeline.hpp"
#include "graphrom/state_graph.hpp"
#include "graphrom/synth.hpp"

namespace {

using namespace graphrom;

int cmd_synth(const std::string& recipe, std::uint64_t seed, int n_steps, double dt, double noise,
              const std::string& out) {
    SynthSpec spec;
    spec.recipe = parse_recipe(recipe);
    spec.seed = seed;
    spec.n_steps = n_steps;
    spec.dt = dt;
    spec.noise = noise;
    write_synth_csv(spec, out);
    std::cout << "wrote " << out << " (" << recipe << ", seed " << seed << ", " << n_steps
              << " steps)\n";
    return kExitOk;
}

int cmd_ingest_check(const std::string& path, const std::string& format) {
    const TimeSeries series = ingest(path, parse_format(format));
    std::cout << "ok: " << series.length() << " rows, " << series.names.size()
              << " columns over t in [" << format_double(series.t.front()) << ", "
              << format_double(series.t.back()) << "]\n";
    for (const auto& name : series.names) std::cout << "  column " << name << "\n";
    return kExitOk;
}

int cmd_fit(const std::string& config_path) {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    const PipelineResult result = run_pipeline(cfg);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    const auto& last = result.trace.records.back();
    std::cout << "fit complete: " << last.active_terms << " retained terms, loss "
              << format_double(last.loss_total) << ", artifacts in " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_error_study(int order, std::vector<int> n_list, double epsilon, const std::string& norm_s,
                    const std::string& out_dir, bool do_assert, double tolerance, bool svg) {
    errorlab::ErrorNorm norm;
    if (norm_s == "1")
        norm = errorlab::ErrorNorm::L1;
    else if (norm_s == "2")
        norm = errorlab::ErrorNorm::L2;
    else if (norm_s == "inf")
        norm = errorlab::ErrorNorm::Linf;
    else
        throw ConfigError("norm must be 1, 2 or inf");
    if (n_list.size() < 3) throw ConfigError("n-list needs at least 3 mesh sizes");

    const errorlab::PolySpec quadratic{{0.3, 1.0, 0.7}};
    const double L = 1.0;
    struct Study {
        const char* name;
        errorlab::DerivativeMode mode;
        double expected_slope;
    };
    const Study studies[] = {
        {"differential_baseline", errorlab::DerivativeMode::DifferentialExact, 2.0},
        {"nonlocal", errorlab::DerivativeMode::NonLocal, 1.0},
    };

    std::filesystem::create_directories(out_dir);
    nlohmann::ordered_json summary;
    summary["schema"] = 1;
    summary["studies"] = nlohmann::ordered_json::array();
    bool all_ok = true;
    for (const auto& st : studies) {
        const auto res = errorlab::convergence_study(quadratic, order, L, n_list, epsilon, norm,
                                                     st.mode);
        std::vector<std::vector<double>> rows;
        for (const auto& rec : res.records)
            rows.push_back({static_cast<double>(rec.n), rec.h, rec.error_l1, rec.error_l2,
                            rec.error_linf, rec.in_slope_window ? 1.0 : 0.0});
        const std::string csv_path = out_dir + "/" + st.name + ".csv";
        write_csv(csv_path, {"n", "h", "error_l1", "error_l2", "error_linf", "slope_window"},
                  rows);
        if (svg) {
            std::vector<double> xs;
            std::vector<std::vector<double>> lines(1);
            for (const auto& rec : res.records) {
                xs.push_back(std::log10(rec.h));
                lines[0].push_back(std::log10(std::max(rec.error_l2, 1e-300)));
            }
            write_text(out_dir + "/" + st.name + ".svg",
                       render_svg_lines(xs, lines, {"log10 error_l2 vs log10 h"}));
        }
        const bool ok = std::abs(res.slope - st.expected_slope) <= tolerance;
        all_ok = all_ok && ok;
        nlohmann::ordered_json entry;
        entry["study"] = st.name;
        entry["slope"] = res.slope;
        entry["expected_slope"] = st.expected_slope;
        entry["floor_value"] = res.floor_value;
        entry["within_tolerance"] = ok;
        summary["studies"].push_back(entry);
        std::cout << st.name << ": slope " << format_double(res.slope) << " (expected "
                  << format_double(st.expected_slope) << ")\n";
    }
    write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
    if (do_assert && !all_ok) {
        std::cerr << "error-study: slope outside tolerance " << tolerance << "\n";
        return kExitAssertFailure;
    }
    return kExitOk;
}

int cmd_weights_diag(const std::string& config_path, const std::string& out) {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    TimeSeries series = ingest(cfg.input_path, cfg.input_format);
    if (cfg.filter_window > 0)
        series = gaussian_filter(series, cfg.filter_window, cfg.filter_sigma, cfg.filter_passes);
    std::vector<StateVector> states(static_cast<std::size_t>(series.length()));
    for (int k = 0; k < series.length(); ++k) {
        StateVector s;
        s.labels = cfg.state_columns;
        for (const auto& name : cfg.state_columns) s.components.push_back(series.column(name)[k]);
        states[static_cast<std::size_t>(k)] = std::move(s);
    }
    const StateGraph graph = StateGraph::build(std::move(states), {}, cfg.weight);
    const Eigen::MatrixXd dev = gram_max_deviation(graph);
    std::vector<std::vector<double>> rows;
    for (int a = 0; a < graph.dim(); ++a)
        for (int b = 0; b < graph.dim(); ++b)
            rows.push_back({static_cast<double>(a), static_cast<double>(b), dev(a, b)});
    write_csv(out, {"alpha", "beta", "gram_deviation"}, rows);
    std::cout << "max gram deviation " << format_double(dev.maxCoeff()) << ", wrote " << out
              << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-based reduced-order modeling toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic time-series csv");
    std::string recipe = "microstructure-like", synth_out = "synth.csv";
    std::uint64_t seed = 1;
    int n_steps = 200;
    double dt = 0.05, noise = 0.0;
    synth->add_option("--recipe", recipe,
                      "damped-oscillator-states | planted-sparse-linear | microstructure-like");
    synth->add_option("--seed", seed, "rng seed");
    synth->add_option("--steps", n_steps, "number of samples");
    synth->add_option("--dt", dt, "time step");
    synth->add_option("--noise", noise, "additive noise scale");
    synth->add_option("-o,--out", synth_out, "output csv path");

    // ingest-check
    auto* check = app.add_subcommand("ingest-check", "Validate an input file and list columns");
    std::string check_path, check_format = "csv";
    check->add_option("path", check_path, "input file")->required();
    check->add_option("--format", check_format, "csv | json");

    // fit
    auto* fit = app.add_subcommand("fit", "Run the full pipeline from a json config");
    std::string fit_config;
    fit->add_option("config", fit_config, "json config path")->required();

    // error-study
    auto* study = app.add_subcommand("error-study", "Mesh-refinement convergence studies");
    int order = 1;
    std::vector<int> n_list = {8, 16, 32, 64, 128};
    double epsilon = 0.0, tolerance = 0.2;
    std::string norm_s = "2", study_out = "error_study";
    bool do_assert = false, study_svg = false;
    study->add_option("--order", order, "surrogate model order");
    study->add_option("--n-list", n_list, "mesh sizes (>= 3 entries)");
    study->add_option("--epsilon", epsilon, "polynomial weight exponent in [0,1)");
    study->add_option("--norm", norm_s, "1 | 2 | inf");
    study->add_option("-o,--out", study_out, "output directory");
    study->add_flag("--assert", do_assert, "exit nonzero when slopes deviate");
    study->add_option("--tolerance", tolerance, "slope tolerance for --assert");
    study->add_flag("--svg", study_svg, "emit log-log svg charts");

    // weights-diag
    auto* diag = app.add_subcommand("weights-diag", "Discrete weight-constraint residual report");
    std::string diag_config, diag_out = "weights_diag.csv";
    diag->add_option("config", diag_config, "json config path")->required();
    diag->add_option("-o,--out", diag_out, "output csv path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(recipe, seed, n_steps, dt, noise, synth_out);
        if (check->parsed()) return cmd_ingest_check(check_path, check_format);
        if (fit->parsed()) return cmd_fit(fit_config);
        if (study->parsed())
            return cmd_error_study(order, n_list, epsilon, norm_s, study_out, do_assert,
                                   tolerance, study_svg);
        if (diag->parsed()) return cmd_weights_diag(diag_config, diag_out);
    } catch (const graphrom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return graphrom::kExitConfigError;
    } catch (const graphrom::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return graphrom::kExitDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return graphrom::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return graphrom::kExitDataError;
    }
    return graphrom::kExitOk;
}
