#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "graphrom/weight_kernels.hpp"

namespace graphrom {

/// One state: a p-dimensional vector of dimensionless quantities with
/// component labels.
struct StateVector {
    std::vector<double> components;
    std::vector<std::string> labels;

    void validate() const;
};

/// Fully connected weighted graph over computed states. Immutable once built;
/// safe to read from many threads.
class StateGraph {
public:
    static StateGraph build(std::vector<StateVector> states,
                            std::map<std::string, Eigen::VectorXd> observables,
                            const WeightSpec& weight_spec);

    int size() const { return static_cast<int>(states_.size()); }
    int dim() const { return dim_; }
    double radius() const { return radius_; }
    const WeightSpec& weight_spec() const { return spec_; }

    const StateVector& state(int i) const { return states_.at(i); }
    double component(int i, int alpha) const { return states_[i].components[alpha]; }
    double weight(int i, int j) const { return weights_(i, j); }
    const Eigen::MatrixXd& weights() const { return weights_; }

    bool has_observable(const std::string& name) const;
    const Eigen::VectorXd& observable(const std::string& name) const;
    const std::map<std::string, Eigen::VectorXd>& observables() const { return observables_; }

    double pairwise_distance(int i, int j) const;

private:
    StateGraph() = default;

    std::vector<StateVector> states_;
    std::map<std::string, Eigen::VectorXd> observables_;
    Eigen::MatrixXd weights_;
    WeightSpec spec_;
    double radius_ = 0.0;
    int dim_ = 0;
};

} // namespace graphrom
