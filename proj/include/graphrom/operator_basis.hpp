#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphrom/nonlocal_calculus.hpp"
#include "graphrom/state_graph.hpp"

namespace graphrom {

/// One column of a design matrix: a monomial in named observables, optionally
/// multiplied by a single derivative factor or a single special column
/// (interfacial length / particle count), or a Taylor multi-index term.
struct TermDescriptor {
    std::map<std::string, int> powers;
    std::optional<DerivativeRequest> derivative;  ///< derivative of `derivative_of`
    std::string derivative_of;
    std::string special;  ///< special column name, empty if none

    bool is_taylor = false;
    std::vector<int> taylor_index;  ///< ordered component indices, empty = base term

    /// Canonical name; defines column ordering, serialization, and stepwise
    /// tie-breaks.
    std::string name() const;
    int total_degree() const;
};

struct DynamicsBasisConfig {
    std::vector<std::string> polynomial_variables;
    std::string derivative_function;                    ///< observable to differentiate
    std::vector<std::vector<int>> derivative_requests;  ///< multi-indices into state components
    std::vector<std::string> special_columns;
    int degree_cap = 3;
};

/// The derivative family used for the phase-fraction dynamics model: second
/// and third order mixed partials in the chemical component and the strain
/// components, with strain pairs enumerated symmetrically (or ordered).
std::vector<std::vector<int>> dynamics_derivative_requests(int chem_index,
                                                           const std::vector<int>& strain_indices,
                                                           bool symmetric_pairs = true);

struct TaylorBasisConfig {
    int order = 4;               ///< expansion order k
    std::vector<int> variables;  ///< state component indices, length q
    int base_index = 0;
    bool symmetric_dedup = false;  ///< collapse permutation-equivalent multi-indices
};

struct OperatorBasis {
    Eigen::MatrixXd X;
    std::vector<TermDescriptor> descriptors;
    std::vector<bool> fixed;  ///< exactly one fixed column for Taylor bases

    /// Diagonal normalizers attached when the basis is fitted; empty until then.
    Eigen::VectorXd col_scale;
    double target_scale = 0.0;

    int columns() const { return static_cast<int>(descriptors.size()); }
};

/// Enumerate all products of monomials (total degree <= cap) with at most one
/// derivative or special factor of exponent one.
OperatorBasis build_dynamics_basis(const StateGraph& g, const DynamicsBasisConfig& cfg);

/// Modified Taylor series design matrix about the base vertex: derivative
/// values evaluated once at the base and broadcast, 1/l! folded into the
/// column. The zeroth-order column is the unique fixed column.
OperatorBasis build_taylor_basis(const StateGraph& g, const VertexFunction& f,
                                 const TaylorBasisConfig& cfg);

/// Expected ordered-tuple Taylor term count: sum_{l=0..k} q^l.
long taylor_term_count(int q, int k);

/// Map normalized coefficients fitted on one dataset into the normalized
/// frame of a second dataset with identical descriptors, preserving the
/// unnormalized prediction.
Eigen::VectorXd renormalize_for_new_data(const OperatorBasis& basis_old,
                                         const Eigen::VectorXd& coeffs_old,
                                         const OperatorBasis& basis_new);

} // namespace graphrom
