#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "graphrom/state_graph.hpp"

namespace graphrom {

/// Values of a scalar function at every vertex.
using VertexFunction = Eigen::VectorXd;

/// Function on vertex pairs; the diagonal is unused.
struct EdgeVector {
    Eigen::MatrixXd values;
};

/// Ordered multi-index (alpha_1, ..., alpha_q). Order is significant: mixed
/// non-local partials need not commute.
struct DerivativeRequest {
    std::vector<int> multi_index;
};

/// Gradient entry (i,j) = (f_j - f_i) * sqrt(w_ij), all j != i.
EdgeVector nonlocal_gradient(const StateGraph& g, const VertexFunction& f);

/// (1/n) sum_i f1_i f2_i.
double scalar_inner_product(const StateGraph& g, const VertexFunction& f1,
                            const VertexFunction& f2);

/// (1/(n-1)) sum_{j != i} v1(i,j) v2(i,j).
double vector_dot_at(const StateGraph& g, const EdgeVector& v1, const EdgeVector& v2, int i);

/// Coordinate unit vector: entry (i,j) = (x_j^alpha - x_i^alpha) * sqrt(w_ij).
EdgeVector unit_vector(const StateGraph& g, int alpha);

/// Non-local partial derivative of arbitrary order, defined recursively by
/// repeated application of the first-order operator, contracting with the
/// last multi-index component last.
VertexFunction partial_derivative(const StateGraph& g, const VertexFunction& f,
                                  const DerivativeRequest& req);

/// Gram matrix G^{ab} = unit_vector(a) . unit_vector(b) at vertex i.
/// Diagnostic only; deviation from identity measures how far the discrete
/// weight constraint is from being satisfied.
Eigen::MatrixXd gram_matrix_at(const StateGraph& g, int i);

/// Max over vertices of |G(i) - I| entrywise.
Eigen::MatrixXd gram_max_deviation(const StateGraph& g);

/// Commutator norm ||d2f/dxdy - d2f/dydx||_inf, reported as a diagnostic.
double mixed_partial_commutator(const StateGraph& g, const VertexFunction& f,
                                int alpha, int beta);

/// Memoizes partial derivatives of one function on one graph, sharing
/// multi-index prefixes across a basis of derivative columns.
class DerivativeCache {
public:
    DerivativeCache(const StateGraph& g, VertexFunction f);
    const VertexFunction& get(const std::vector<int>& multi_index);

private:
    const StateGraph& g_;
    VertexFunction f_;
    std::map<std::vector<int>, VertexFunction> cache_;
};

} // namespace graphrom
