#pragma once

#include <vector>

#include "graphrom/state_graph.hpp"

namespace graphrom::errorlab {

/// Interlaced 1D mesh: n+1 training points at even multiples of h and n
/// testing points at odd multiples, h = L/(2n).
struct Mesh1D {
    int n = 0;
    double L = 0.0;
    double h = 0.0;
    std::vector<double> training;  ///< {0, 2h, ..., 2nh}
    std::vector<double> testing;   ///< {h, 3h, ..., (2n-1)h}

    static Mesh1D build(int n, double L);
};

/// Polynomial target u(x) = sum_l alpha[l] x^l.
struct PolySpec {
    std::vector<double> alpha;

    void validate() const;
    int degree() const { return static_cast<int>(alpha.size()) - 1; }
    double eval(double x) const;
    double derivative(double x, int order = 1) const;
};

/// Power sum sum_{j=1..n} j^l through the Bernoulli closed form, exact in
/// 128-bit integer arithmetic. The l = 0 value is n: the j = 0 term is
/// dropped so the constant case matches the convention used by the closed
/// derivative formulas (the literal sum from j = 0 would give n + 1).
__int128 faulhaber_exact(int l, long n);
double faulhaber(int l, long n);

/// sum_{j=1..n} j^(-epsilon).
double harmonic(double epsilon, long n);

/// Symmetric power-difference kernel p_l[i,j] = sum_{q=1..l} i^(q-1) j^(l-q),
/// so that j^l - i^l = (j - i) p_l[i,j].
double power_difference_kernel(int l, long i, long j);

/// Closed-form non-local first derivative of the polynomial target at
/// training index i, using the n+1-vertex mesh's 1/n prefactor:
///   (C_eps/n) sum_l alpha_l (2h)^(l-1-eps) sum_{j!=i} p_l[i,j] / |j-i|^eps
/// with C_eps = (1-eps)(L/2)^eps. The eps = 0 branch reduces the inner sums
/// to power-sum closed forms.
double nonlocal_derivative_closed(const PolySpec& spec, const Mesh1D& mesh, int i, double epsilon);

/// Cross-check: build a StateGraph over the training points with polynomial
/// weights of matching epsilon and compare the graph first derivative against
/// the closed form at every training vertex. Returns the max abs deviation.
double oracle_match_graph_derivative(const PolySpec& spec, const Mesh1D& mesh, double epsilon);

/// Constrained linear-model fit at training index i: with the zeroth
/// coefficient pinned to 1, fit u(x_j) - u(x_i) = g1 * b_j over training
/// vertices where b_j = D(x_i) (x_j - x_i) and D is the closed-form
/// non-local derivative. Equals sum b_j d_j / sum b_j^2.
double fit_gamma1(const PolySpec& spec, const Mesh1D& mesh, int i);

/// Expected h->0 limit of fit_gamma1 for a quadratic target:
/// (1 + (3/4) L a2/a1) / (1 + (1/2) L a2/a1).
double gamma1_quadratic_limit(double L, double a1, double a2);

enum class DerivativeMode {
    NonLocal,          ///< graph-path derivatives, per-base fitted coefficients
    DifferentialExact  ///< analytic polynomial derivatives, coefficients pinned to 1
};

enum class ErrorNorm { L1, L2, Linf };

struct StudyRecord {
    int n = 0;
    double h = 0.0;
    double error_l1 = 0.0;
    double error_l2 = 0.0;
    double error_linf = 0.0;
    bool in_slope_window = true;
};

struct StudyResult {
    std::vector<StudyRecord> records;
    double slope = 0.0;        ///< log-log fit over the pre-floor window
    double floor_value = 0.0;  ///< selected-norm error at the smallest floored h, 0 if none
    ErrorNorm norm = ErrorNorm::L2;
};

/// Convergence of the order-k surrogate evaluated at testing points, each
/// expanded about the training point directly to its left. For each n the
/// pointwise errors are aggregated as ((1/n) sum |e|^l)^(1/l) (max for Linf).
/// The slope is the least-squares fit of log error against log h; trailing
/// points whose error flattens within 5% across a halving are excluded from
/// the fit and reported as the floor.
StudyResult convergence_study(const PolySpec& spec, int k, double L,
                              const std::vector<int>& n_list, double epsilon,
                              ErrorNorm norm, DerivativeMode mode);

} // namespace graphrom::errorlab
