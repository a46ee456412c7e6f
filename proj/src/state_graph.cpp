#include "graphrom/state_graph.hpp"

#include <cmath>
#include <stdexcept>

#include "graphrom/detail/reduction.hpp"

namespace graphrom {

void StateVector::validate() const {
    if (components.empty())
        throw std::invalid_argument("StateVector: dimension must be >= 1");
    if (!labels.empty() && labels.size() != components.size())
        throw std::invalid_argument("StateVector: labels must align with components");
    for (double c : components)
        if (!std::isfinite(c))
            throw std::invalid_argument("StateVector: non-finite component");
}

StateGraph StateGraph::build(std::vector<StateVector> states,
                             std::map<std::string, Eigen::VectorXd> observables,
                             const WeightSpec& weight_spec) {
    const int n = static_cast<int>(states.size());
    if (n < 2) throw std::invalid_argument("StateGraph: fewer than 2 vertices");
    states.front().validate();
    const int p = static_cast<int>(states.front().components.size());
    for (const auto& s : states) {
        s.validate();
        if (static_cast<int>(s.components.size()) != p)
            throw std::invalid_argument("StateGraph: state dimension mismatch");
    }
    for (const auto& [name, col] : observables)
        if (col.size() != n)
            throw std::invalid_argument("StateGraph: observable '" + name + "' length mismatch");

    StateGraph g;
    g.states_ = std::move(states);
    g.observables_ = std::move(observables);
    g.dim_ = p;

    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    double max_dist = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<double> sq(p);
            for (int a = 0; a < p; ++a) {
                const double d = g.states_[j].components[a] - g.states_[i].components[a];
                sq[a] = d * d;
            }
            const double r = std::sqrt(detail::pairwise_sum(sq));
            if (r == 0.0)
                throw std::invalid_argument(
                    "StateGraph: duplicate state vectors at vertices " + std::to_string(i) +
                    " and " + std::to_string(j));
            dist(i, j) = dist(j, i) = r;
            max_dist = std::max(max_dist, r);
        }
    g.radius_ = max_dist / 2.0;

    WeightSpec spec = weight_spec;
    if (spec.p != p) throw std::invalid_argument("StateGraph: weight spec dimension mismatch");
    if (!(spec.R > 0.0)) spec.R = g.radius_;  // R marked auto
    spec = resolve_scale(spec);
    g.spec_ = spec;

    g.weights_ = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double w = eval_weight(spec, dist(i, j));
            g.weights_(i, j) = g.weights_(j, i) = w;  // same bits by construction
        }
    return g;
}

bool StateGraph::has_observable(const std::string& name) const {
    return observables_.count(name) != 0;
}

const Eigen::VectorXd& StateGraph::observable(const std::string& name) const {
    auto it = observables_.find(name);
    if (it == observables_.end())
        throw std::invalid_argument("StateGraph: unknown observable '" + name + "'");
    return it->second;
}

double StateGraph::pairwise_distance(int i, int j) const {
    const int n = size();
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::out_of_range("pairwise_distance: vertex index out of range");
    if (i == j)
        throw std::invalid_argument("pairwise_distance: self distance excluded (no self edges)");
    std::vector<double> sq(dim_);
    for (int a = 0; a < dim_; ++a) {
        const double d = states_[j].components[a] - states_[i].components[a];
        sq[a] = d * d;
    }
    return std::sqrt(detail::pairwise_sum(sq));
}

} // namespace graphrom
