#include <doctest.h>

#include <random>

#include "graphrom/nonlocal_calculus.hpp"

using namespace graphrom;

namespace {

StateGraph line_graph(int n, double spacing = 1.0) {
    std::vector<StateVector> states(n);
    for (int k = 0; k < n; ++k) states[k] = StateVector{{k * spacing}, {}};
    WeightSpec spec;
    spec.family = WeightFamily::Polynomial;
    spec.p = 1;
    spec.R = 0.0;
    return StateGraph::build(std::move(states), {}, spec);
}

/// Rescale weights so the 1D discrete constraint sum_j (dx)^2 w = (n-1) holds
/// exactly at vertex i; returns a graph with C adjusted globally for i=0.
StateGraph constraint_exact_line(int n) {
    const StateGraph g0 = line_graph(n);
    const Eigen::MatrixXd gram = gram_matrix_at(g0, 0);
    WeightSpec spec = g0.weight_spec();
    spec.C /= gram(0, 0);
    spec.auto_scale = false;
    std::vector<StateVector> states(n);
    for (int k = 0; k < n; ++k) states[k] = StateVector{{static_cast<double>(k)}, {}};
    return StateGraph::build(std::move(states), {}, spec);
}

} // namespace

TEST_CASE("gradient of a constant vanishes; antisymmetry") {
    const StateGraph g = line_graph(6);
    const EdgeVector zero = nonlocal_gradient(g, VertexFunction::Constant(6, 3.7));
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    VertexFunction f(6);
    for (int k = 0; k < 6; ++k) f[k] = uni(rng);
    const EdgeVector grad = nonlocal_gradient(g, f);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(grad.values(i, j) == doctest::Approx(-grad.values(j, i)).epsilon(1e-14));
}

TEST_CASE("scalar inner product normalization") {
    const StateGraph g = line_graph(5);
    CHECK(scalar_inner_product(g, VertexFunction::Ones(5), VertexFunction::Ones(5)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    VertexFunction a = VertexFunction::Zero(5), b = VertexFunction::Zero(5);
    a[0] = 2.0;
    b[3] = 5.0;  // disjoint supports
    CHECK(scalar_inner_product(g, a, b) == 0.0);
    CHECK_THROWS_AS(scalar_inner_product(g, VertexFunction::Ones(4), b), std::invalid_argument);
}

TEST_CASE("unit vector equals gradient of the coordinate function") {
    const StateGraph g = line_graph(5, 0.7);
    VertexFunction x(5);
    for (int k = 0; k < 5; ++k) x[k] = g.component(k, 0);
    const EdgeVector via_gradient = nonlocal_gradient(g, x);
    const EdgeVector direct = unit_vector(g, 0);
    CHECK((via_gradient.values - direct.values).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("vector dot products") {
    const StateGraph g = line_graph(5);
    const EdgeVector u = unit_vector(g, 0);
    EdgeVector zero{Eigen::MatrixXd::Zero(5, 5)};
    CHECK(vector_dot_at(g, u, zero, 2) == 0.0);
    for (int i = 0; i < 5; ++i) CHECK(vector_dot_at(g, u, u, i) >= 0.0);
    // unit-vector self-contraction is the Gram entry
    CHECK(vector_dot_at(g, u, u, 1) == doctest::Approx(gram_matrix_at(g, 1)(0, 0)).epsilon(1e-14));
}

TEST_CASE("derivative of linear function on a constraint-exact line") {
    const StateGraph g = constraint_exact_line(7);
    CHECK(gram_matrix_at(g, 0)(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    const double a = 2.5;
    VertexFunction f(7);
    for (int k = 0; k < 7; ++k) f[k] = a * g.component(k, 0);
    const VertexFunction d = partial_derivative(g, f, {{0}});
    // the constraint is pinned at vertex 0; exactness holds there
    CHECK(d[0] == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("derivative requests validated") {
    const StateGraph g = line_graph(4);
    const VertexFunction f = VertexFunction::Ones(4);
    CHECK_THROWS_AS(partial_derivative(g, f, {{}}), std::invalid_argument);
    CHECK_THROWS_AS(partial_derivative(g, f, {{1}}), std::out_of_range);
    CHECK_THROWS_AS(partial_derivative(g, f, {{0, 0, 0, 0, 0, 0, 0, 0, 0}}),
                    std::invalid_argument);
    CHECK(partial_derivative(g, f, {{0, 0}}).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("higher orders are sequential first-order applications") {
    const StateGraph g = line_graph(6);
    VertexFunction f(6);
    for (int k = 0; k < 6; ++k) f[k] = std::sin(0.8 * k) + 0.2 * k * k;
    const VertexFunction once = partial_derivative(g, f, {{0}});
    const VertexFunction twice_direct = partial_derivative(g, f, {{0, 0}});
    const VertexFunction twice_seq = partial_derivative(g, once, {{0}});
    CHECK((twice_direct - twice_seq).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("derivative cache shares prefixes") {
    std::vector<StateVector> states;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int k = 0; k < 8; ++k) states.push_back(StateVector{{uni(rng), uni(rng)}, {}});
    WeightSpec spec;
    spec.family = WeightFamily::Polynomial;
    spec.p = 2;
    spec.R = 0.0;
    const StateGraph g = StateGraph::build(std::move(states), {}, spec);
    VertexFunction f(8);
    for (int k = 0; k < 8; ++k) f[k] = uni(rng);

    DerivativeCache cache(g, f);
    for (const std::vector<int>& idx :
         {std::vector<int>{0}, {1}, {0, 1}, {0, 1, 0}, {1, 0, 1}}) {
        const VertexFunction direct = partial_derivative(g, f, {idx});
        CHECK((cache.get(idx) - direct).cwiseAbs().maxCoeff() == 0.0);
    }

    // the commutator diagnostic is finite and symmetric under swap
    const double c01 = mixed_partial_commutator(g, f, 0, 1);
    const double c10 = mixed_partial_commutator(g, f, 1, 0);
    CHECK(c01 == doctest::Approx(c10).epsilon(1e-14));
}

TEST_CASE("gram deviation diagnostic") {
    const StateGraph g = line_graph(5);
    const Eigen::MatrixXd dev = gram_max_deviation(g);
    CHECK(dev.rows() == 1);
    CHECK(dev(0, 0) >= 0.0);
    const StateGraph exact = constraint_exact_line(6);
    CHECK(std::abs(gram_matrix_at(exact, 0)(0, 0) - 1.0) < 1e-13);
}
