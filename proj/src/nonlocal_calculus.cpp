#include "graphrom/nonlocal_calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "graphrom/detail/reduction.hpp"

namespace graphrom {

namespace {

void check_function(const StateGraph& g, const VertexFunction& f) {
    if (f.size() != g.size())
        throw std::invalid_argument("vertex function length does not match graph size");
}

void check_component(const StateGraph& g, int alpha) {
    if (alpha < 0 || alpha >= g.dim())
        throw std::out_of_range("component index out of range");
}

// First-order operator: value at i is (1/(n-1)) sum_{j!=i} (f_j - f_i)(x_j^a - x_i^a) w_ij.
// Ascending-j pairwise reduction keeps the result bit-reproducible.
VertexFunction first_order(const StateGraph& g, const VertexFunction& f, int alpha) {
    const int n = g.size();
    VertexFunction out(n);
    std::vector<double> terms(n - 1);
    for (int i = 0; i < n; ++i) {
        int k = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            terms[k++] = (f[j] - f[i]) * (g.component(j, alpha) - g.component(i, alpha)) *
                         g.weight(i, j);
        }
        out[i] = detail::pairwise_sum(terms) / static_cast<double>(n - 1);
    }
    return out;
}

} // namespace

EdgeVector nonlocal_gradient(const StateGraph& g, const VertexFunction& f) {
    check_function(g, f);
    const int n = g.size();
    EdgeVector grad{Eigen::MatrixXd::Zero(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            grad.values(i, j) = (f[j] - f[i]) * std::sqrt(g.weight(i, j));
        }
    return grad;
}

double scalar_inner_product(const StateGraph& g, const VertexFunction& f1,
                            const VertexFunction& f2) {
    check_function(g, f1);
    check_function(g, f2);
    const int n = g.size();
    std::vector<double> terms(n);
    for (int i = 0; i < n; ++i) terms[i] = f1[i] * f2[i];
    return detail::pairwise_sum(terms) / static_cast<double>(n);
}

double vector_dot_at(const StateGraph& g, const EdgeVector& v1, const EdgeVector& v2, int i) {
    const int n = g.size();
    if (i < 0 || i >= n) throw std::out_of_range("vector_dot_at: vertex index out of range");
    std::vector<double> terms(n - 1);
    int k = 0;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        terms[k++] = v1.values(i, j) * v2.values(i, j);
    }
    return detail::pairwise_sum(terms) / static_cast<double>(n - 1);
}

EdgeVector unit_vector(const StateGraph& g, int alpha) {
    check_component(g, alpha);
    const int n = g.size();
    EdgeVector out{Eigen::MatrixXd::Zero(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            out.values(i, j) =
                (g.component(j, alpha) - g.component(i, alpha)) * std::sqrt(g.weight(i, j));
        }
    return out;
}

VertexFunction partial_derivative(const StateGraph& g, const VertexFunction& f,
                                  const DerivativeRequest& req) {
    check_function(g, f);
    const auto& idx = req.multi_index;
    if (idx.empty()) throw std::invalid_argument("partial_derivative: order must be >= 1");
    if (idx.size() > 8) throw std::invalid_argument("partial_derivative: order capped at 8");
    for (int a : idx) check_component(g, a);
    VertexFunction cur = f;
    for (int a : idx) cur = first_order(g, cur, a);
    return cur;
}

Eigen::MatrixXd gram_matrix_at(const StateGraph& g, int i) {
    const int n = g.size();
    if (i < 0 || i >= n) throw std::out_of_range("gram_matrix_at: vertex index out of range");
    const int p = g.dim();
    Eigen::MatrixXd gram(p, p);
    std::vector<double> terms(n - 1);
    for (int a = 0; a < p; ++a)
        for (int b = a; b < p; ++b) {
            int k = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                terms[k++] = (g.component(j, a) - g.component(i, a)) *
                             (g.component(j, b) - g.component(i, b)) * g.weight(i, j);
            }
            const double v = detail::pairwise_sum(terms) / static_cast<double>(n - 1);
            gram(a, b) = gram(b, a) = v;
        }
    return gram;
}

Eigen::MatrixXd gram_max_deviation(const StateGraph& g) {
    const int p = g.dim();
    Eigen::MatrixXd dev = Eigen::MatrixXd::Zero(p, p);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
    for (int i = 0; i < g.size(); ++i)
        dev = dev.cwiseMax((gram_matrix_at(g, i) - eye).cwiseAbs());
    return dev;
}

double mixed_partial_commutator(const StateGraph& g, const VertexFunction& f,
                                int alpha, int beta) {
    const VertexFunction ab = partial_derivative(g, f, {{alpha, beta}});
    const VertexFunction ba = partial_derivative(g, f, {{beta, alpha}});
    return (ab - ba).lpNorm<Eigen::Infinity>();
}

DerivativeCache::DerivativeCache(const StateGraph& g, VertexFunction f)
    : g_(g), f_(std::move(f)) {
    check_function(g_, f_);
}

const VertexFunction& DerivativeCache::get(const std::vector<int>& multi_index) {
    auto it = cache_.find(multi_index);
    if (it != cache_.end()) return it->second;
    VertexFunction result;
    if (multi_index.size() == 1) {
        result = partial_derivative(g_, f_, {multi_index});
    } else {
        // reuse the (q-1)-order prefix
        std::vector<int> prefix(multi_index.begin(), multi_index.end() - 1);
        const VertexFunction& base = get(prefix);
        result = partial_derivative(g_, base, {{multi_index.back()}});
    }
    return cache_.emplace(multi_index, std::move(result)).first->second;
}

} // namespace graphrom
