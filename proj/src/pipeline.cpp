#include "graphrom/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphrom/nonlocal_calculus.hpp"
#include "graphrom/state_graph.hpp"

namespace graphrom {

namespace {

using ordered_json = nlohmann::ordered_json;

const ordered_json& require(const ordered_json& j, const std::string& key,
                            const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError("missing required field '" + path + "'");
    return j.at(key);
}

std::string require_string(const ordered_json& j, const std::string& key,
                           const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_string()) throw ConfigError("field '" + path + "' must be a string");
    return v.get<std::string>();
}

double number_or(const ordered_json& j, const std::string& key, const std::string& path,
                 double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError("field '" + path + "' must be a number");
    return j.at(key).get<double>();
}

int int_or(const ordered_json& j, const std::string& key, const std::string& path, int fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw ConfigError("field '" + path + "' must be an integer");
    return j.at(key).get<int>();
}

std::vector<std::string> string_list(const ordered_json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("field '" + path + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw ConfigError("field '" + path + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

} // namespace

RunConfig RunConfig::parse(const ordered_json& j) {
    RunConfig cfg;
    cfg.raw = j;
    if (int_or(j, "schema", "schema", 1) != 1) throw ConfigError("field 'schema' must be 1");

    const auto& input = require(j, "input", "input");
    cfg.input_path = require_string(input, "path", "input.path");
    cfg.input_format = parse_format(require_string(input, "format", "input.format"));

    const auto& columns = require(j, "columns", "columns");
    cfg.time_column = columns.contains("time") ? require_string(columns, "time", "columns.time")
                                               : std::string("t");
    cfg.state_columns = string_list(require(columns, "state", "columns.state"), "columns.state");
    if (cfg.state_columns.empty()) throw ConfigError("field 'columns.state' must be non-empty");
    if (columns.contains("observables"))
        cfg.observable_columns = string_list(columns.at("observables"), "columns.observables");
    const auto& target = require(columns, "target", "columns.target");
    if (target.is_object() && target.contains("derivative_of"))
        cfg.target_derivative_of = require_string(target, "derivative_of",
                                                  "columns.target.derivative_of");
    else if (target.is_string())
        cfg.target_column = target.get<std::string>();
    else
        throw ConfigError(
            "field 'columns.target' must be a column name or {\"derivative_of\": column}");

    if (j.contains("preprocess")) {
        const auto& pre = j.at("preprocess");
        if (pre.contains("filter")) {
            const auto& f = pre.at("filter");
            cfg.filter_window = int_or(f, "window", "preprocess.filter.window", 5);
            cfg.filter_sigma = number_or(f, "sigma", "preprocess.filter.sigma", 1.0);
            cfg.filter_passes = int_or(f, "passes", "preprocess.filter.passes", 1);
        }
    }

    if (j.contains("weight")) {
        const auto& w = j.at("weight");
        const std::string family =
            w.contains("family") ? require_string(w, "family", "weight.family") : "polynomial";
        if (family == "gaussian")
            cfg.weight.family = WeightFamily::Gaussian;
        else if (family == "polynomial")
            cfg.weight.family = WeightFamily::Polynomial;
        else
            throw ConfigError("field 'weight.family' must be gaussian or polynomial");
        cfg.weight.R = number_or(w, "R", "weight.R", 0.0);
        cfg.weight.sigma = number_or(w, "sigma", "weight.sigma", 1.0);
        cfg.weight.epsilon = number_or(w, "epsilon", "weight.epsilon", 0.0);
        if (w.contains("C")) {
            cfg.weight.C = number_or(w, "C", "weight.C", 0.0);
            cfg.weight.auto_scale = false;
        }
    }
    cfg.weight.p = static_cast<int>(cfg.state_columns.size());

    const auto& model = require(j, "model", "model");
    const std::string kind = require_string(model, "kind", "model.kind");
    if (kind == "dynamics") {
        cfg.model_kind = ModelKind::Dynamics;
        const auto& dyn = require(model, "dynamics", "model.dynamics");
        cfg.polynomial_variables = string_list(
            require(dyn, "polynomial_variables", "model.dynamics.polynomial_variables"),
            "model.dynamics.polynomial_variables");
        cfg.degree_cap = int_or(dyn, "degree_cap", "model.dynamics.degree_cap", 3);
        if (dyn.contains("derivative_function")) {
            cfg.derivative_function =
                require_string(dyn, "derivative_function", "model.dynamics.derivative_function");
            cfg.chem_component =
                require_string(dyn, "chem_component", "model.dynamics.chem_component");
            if (dyn.contains("strain_components"))
                cfg.strain_components = string_list(dyn.at("strain_components"),
                                                    "model.dynamics.strain_components");
            if (dyn.contains("symmetric_pairs")) {
                if (!dyn.at("symmetric_pairs").is_boolean())
                    throw ConfigError("field 'model.dynamics.symmetric_pairs' must be a boolean");
                cfg.symmetric_pairs = dyn.at("symmetric_pairs").get<bool>();
            }
        }
        if (dyn.contains("special_columns"))
            cfg.special_columns =
                string_list(dyn.at("special_columns"), "model.dynamics.special_columns");
    } else if (kind == "taylor") {
        cfg.model_kind = ModelKind::Taylor;
        const auto& tay = require(model, "taylor", "model.taylor");
        cfg.taylor_order = int_or(tay, "order", "model.taylor.order", 4);
        cfg.taylor_function = require_string(tay, "function", "model.taylor.function");
        cfg.taylor_base_index = int_or(tay, "base_index", "model.taylor.base_index", 0);
    } else {
        throw ConfigError("field 'model.kind' must be dynamics or taylor");
    }

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        const std::string skind =
            s.contains("kind") ? require_string(s, "kind", "solver.kind") : "ols";
        if (skind == "ols")
            cfg.solver.kind = SolverKind::OLS;
        else if (skind == "ridge")
            cfg.solver.kind = SolverKind::Ridge;
        else if (skind == "lasso")
            cfg.solver.kind = SolverKind::Lasso;
        else
            throw ConfigError("field 'solver.kind' must be ols, ridge or lasso");
        if (s.contains("lambda")) {
            if (s.at("lambda").is_string()) {
                if (s.at("lambda").get<std::string>() != "cv")
                    throw ConfigError("field 'solver.lambda' must be a number or \"cv\"");
                cfg.solver.lambda_cv = true;
                if (s.contains("cv_grid")) {
                    if (!s.at("cv_grid").is_array())
                        throw ConfigError("field 'solver.cv_grid' must be an array of numbers");
                    for (const auto& v : s.at("cv_grid")) {
                        if (!v.is_number())
                            throw ConfigError("field 'solver.cv_grid' must be an array of numbers");
                        cfg.solver.cv_grid.push_back(v.get<double>());
                    }
                }
            } else {
                cfg.solver.lambda = number_or(s, "lambda", "solver.lambda", 0.0);
            }
        }
    }

    if (j.contains("loss")) {
        const auto& l = j.at("loss");
        cfg.loss.w2 = number_or(l, "w2", "loss.w2", 1.0);
        cfg.loss.w1 = number_or(l, "w1", "loss.w1", 0.0);
        cfg.loss.winf = number_or(l, "winf", "loss.winf", 0.0);
        cfg.loss.peak_passes = int_or(l, "peak_passes", "loss.peak_passes", 1);
    }

    if (j.contains("stepwise")) {
        const auto& st = j.at("stepwise");
        cfg.stop.min_terms = int_or(st, "min_terms", "stepwise.min_terms", 1);
        if (st.contains("f_threshold"))
            cfg.stop.f_threshold = number_or(st, "f_threshold", "stepwise.f_threshold", 0.0);
        if (st.contains("checkpoints")) {
            if (!st.at("checkpoints").is_array())
                throw ConfigError("field 'stepwise.checkpoints' must be an array of integers");
            for (const auto& v : st.at("checkpoints")) {
                if (!v.is_number_integer())
                    throw ConfigError("field 'stepwise.checkpoints' must be an array of integers");
                cfg.checkpoints.push_back(v.get<int>());
            }
        }
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        cfg.output_dir = o.contains("dir") ? require_string(o, "dir", "output.dir") : ".";
        if (o.contains("svg")) {
            if (!o.at("svg").is_boolean())
                throw ConfigError("field 'output.svg' must be a boolean");
            cfg.emit_svg = o.at("svg").get<bool>();
        }
    }

    try {
        cfg.solver.validate();
        cfg.loss.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid json config: " + std::string(e.what()));
    }
    return parse(j);
}

namespace {

int column_index_of(const std::vector<std::string>& names, const std::string& name,
                    const std::string& path) {
    for (std::size_t c = 0; c < names.size(); ++c)
        if (names[c] == name) return static_cast<int>(c);
    throw ConfigError("field '" + path + "' references unknown column '" + name + "'");
}

std::string trace_csv_text(const StepwiseTrace& trace) {
    std::ostringstream os;
    os << "iteration,active_terms,lambda,f_statistic,loss_total,loss_l2,loss_l1,removed\n";
    for (const auto& rec : trace.records)
        os << rec.iteration << "," << rec.active_terms << "," << format_double(rec.lambda) << ","
           << format_double(rec.f_statistic) << "," << format_double(rec.loss_total) << ","
           << format_double(rec.loss_l2) << "," << format_double(rec.loss_l1) << "," << rec.removed
           << "\n";
    return os.str();
}

} // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
    TimeSeries series = ingest(cfg.input_path, cfg.input_format);
    if (cfg.filter_window > 0)
        series = gaussian_filter(series, cfg.filter_window, cfg.filter_sigma, cfg.filter_passes);

    // target, possibly a backward difference; differencing drops the first row
    Eigen::VectorXd y;
    if (!cfg.target_derivative_of.empty()) {
        const TimeSeries d = backward_euler_derivative(series, cfg.target_derivative_of);
        y = d.columns[0];
        TimeSeries trimmed;
        trimmed.t.assign(series.t.begin() + 1, series.t.end());
        trimmed.names = series.names;
        for (const auto& col : series.columns)
            trimmed.columns.push_back(col.tail(col.size() - 1));
        series = std::move(trimmed);
    } else {
        y = series.column(cfg.target_column);
    }
    const int n = series.length();

    std::vector<StateVector> states(static_cast<std::size_t>(n));
    for (const auto& name : cfg.state_columns) series.column(name);  // existence check
    for (int k = 0; k < n; ++k) {
        StateVector s;
        s.labels = cfg.state_columns;
        for (const auto& name : cfg.state_columns) s.components.push_back(series.column(name)[k]);
        states[static_cast<std::size_t>(k)] = std::move(s);
    }
    std::map<std::string, Eigen::VectorXd> observables;
    for (std::size_t c = 0; c < series.names.size(); ++c)
        observables[series.names[c]] = series.columns[c];

    StateGraph graph = [&] {
        try {
            return StateGraph::build(std::move(states), std::move(observables), cfg.weight);
        } catch (const std::invalid_argument& e) {
            throw DataError(e.what());
        }
    }();

    OperatorBasis basis;
    if (cfg.model_kind == ModelKind::Dynamics) {
        DynamicsBasisConfig bc;
        bc.polynomial_variables = cfg.polynomial_variables;
        bc.special_columns = cfg.special_columns;
        bc.degree_cap = cfg.degree_cap;
        if (!cfg.derivative_function.empty()) {
            bc.derivative_function = cfg.derivative_function;
            const int chem = column_index_of(cfg.state_columns, cfg.chem_component,
                                             "model.dynamics.chem_component");
            std::vector<int> strains;
            for (const auto& s : cfg.strain_components)
                strains.push_back(column_index_of(cfg.state_columns, s,
                                                  "model.dynamics.strain_components"));
            bc.derivative_requests =
                dynamics_derivative_requests(chem, strains, cfg.symmetric_pairs);
        }
        basis = build_dynamics_basis(graph, bc);
    } else {
        TaylorBasisConfig tc;
        tc.order = cfg.taylor_order;
        tc.base_index = cfg.taylor_base_index;
        basis = build_taylor_basis(graph, graph.observable(cfg.taylor_function), tc);
    }

    PipelineResult result;
    if (cfg.solver.kind == SolverKind::Lasso)
        result.warnings.push_back(
            "lasso inside stepwise removal is supported but tends to double-penalize "
            "sparsity; ridge or ols is usually the better choice here");
    result.trace = stepwise_backward(basis, y, cfg.solver, cfg.loss, cfg.stop);
    const StepwiseTrace& trace = result.trace;

    Eigen::VectorXd y_fixed = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < basis.columns(); ++c)
        if (basis.fixed[c]) y_fixed += basis.X.col(c);

    namespace fs = std::filesystem;
    const fs::path out_dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create output directory '" + cfg.output_dir + "'");

    // model.json
    const StepwiseRecord& final_rec = trace.records.back();
    ordered_json model;
    model["schema"] = 1;
    model["config"] = cfg.raw;
    model["terms"] = ordered_json::array();
    for (int c = 0; c < basis.columns(); ++c) {
        const bool retained =
            basis.fixed[c] ||
            std::find(trace.final_active.begin(), trace.final_active.end(), c) !=
                trace.final_active.end();
        if (!retained) continue;
        ordered_json term;
        term["descriptor"] = basis.descriptors[c].name();
        term["coefficient"] = final_rec.coefficients[c];
        term["coefficient_unnormalized"] = trace.final_coefficients_unnormalized[c];
        term["normalizer"] = basis.col_scale[c];
        term["fixed"] = static_cast<bool>(basis.fixed[c]);
        model["terms"].push_back(term);
    }
    model["target_normalizer"] = basis.target_scale;
    model["solver"] = {{"kind", cfg.solver.kind == SolverKind::OLS     ? "ols"
                                : cfg.solver.kind == SolverKind::Ridge ? "ridge"
                                                                       : "lasso"},
                       {"lambda", final_rec.lambda},
                       {"rank", trace.solver_rank},
                       {"cutoff", 1e-12}};
    write_text((out_dir / "model.json").string(), model.dump(2) + "\n");

    write_text((out_dir / "trace.csv").string(), trace_csv_text(trace));

    // fit.csv: target and predictions at the final model plus any requested
    // retained-term checkpoints
    {
        std::vector<std::string> header = {"t", "y"};
        std::vector<const StepwiseRecord*> snaps;
        for (int want : cfg.checkpoints)
            for (const auto& rec : trace.records)
                if (rec.active_terms == want) {
                    header.push_back("yhat_" + std::to_string(want));
                    snaps.push_back(&rec);
                    break;
                }
        header.push_back("yhat_final");
        snaps.push_back(&final_rec);

        std::vector<Eigen::VectorXd> preds;
        for (const auto* rec : snaps) preds.push_back(predict_unnormalized(basis, *rec, y_fixed));
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            auto& row = rows[static_cast<std::size_t>(k)];
            row.push_back(series.t[static_cast<std::size_t>(k)]);
            row.push_back(y[k]);
            for (const auto& p : preds) row.push_back(p[k]);
        }
        write_csv((out_dir / "fit.csv").string(), header, rows);

        if (cfg.emit_svg) {
            std::vector<std::vector<double>> lines(2);
            for (int k = 0; k < n; ++k) {
                lines[0].push_back(y[k]);
                lines[1].push_back(preds.back()[k]);
            }
            write_text((out_dir / "fit.svg").string(),
                       render_svg_lines(series.t, lines, {"y", "yhat_final"}));
        }
    }

    // weights_diag.csv: discrete weight-constraint residual per component pair
    {
        const Eigen::MatrixXd dev = gram_max_deviation(graph);
        std::vector<std::vector<double>> rows;
        for (int a = 0; a < graph.dim(); ++a)
            for (int b = 0; b < graph.dim(); ++b)
                rows.push_back({static_cast<double>(a), static_cast<double>(b), dev(a, b)});
        write_csv((out_dir / "weights_diag.csv").string(), {"alpha", "beta", "gram_deviation"},
                  rows);
    }
    return result;
}

} // namespace graphrom
