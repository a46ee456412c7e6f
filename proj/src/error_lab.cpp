#include "graphrom/error_lab.hpp"

#include <cmath>
#include <stdexcept>

#include "graphrom/nonlocal_calculus.hpp"
#include "graphrom/regression.hpp"

namespace graphrom::errorlab {

Mesh1D Mesh1D::build(int n, double L) {
    if (n < 1) throw std::invalid_argument("Mesh1D: n must be >= 1");
    if (!(L > 0.0)) throw std::invalid_argument("Mesh1D: L must be > 0");
    Mesh1D m;
    m.n = n;
    m.L = L;
    m.h = L / (2.0 * n);
    m.training.resize(n + 1);
    m.testing.resize(n);
    for (int i = 0; i <= n; ++i) m.training[i] = 2.0 * i * m.h;
    for (int i = 0; i < n; ++i) m.testing[i] = (2.0 * i + 1.0) * m.h;
    return m;
}

void PolySpec::validate() const {
    if (alpha.empty()) throw std::invalid_argument("PolySpec: empty coefficient list");
    for (double a : alpha)
        if (!std::isfinite(a)) throw std::invalid_argument("PolySpec: non-finite coefficient");
}

double PolySpec::eval(double x) const {
    double v = 0.0;
    for (std::size_t l = alpha.size(); l-- > 0;) v = v * x + alpha[l];
    return v;
}

double PolySpec::derivative(double x, int order) const {
    if (order < 0) throw std::invalid_argument("PolySpec: negative derivative order");
    double v = 0.0;
    for (int l = degree(); l >= order; --l) {
        double c = alpha[static_cast<std::size_t>(l)];
        for (int q = 0; q < order; ++q) c *= static_cast<double>(l - q);
        v = v * x + c;
    }
    return v;
}

namespace {

struct Rat {
    __int128 num = 0, den = 1;
};

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a ? a : 1;
}

Rat reduce(Rat r) {
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    const __int128 g = gcd128(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

Rat add(Rat a, Rat b) { return reduce({a.num * b.den + b.num * a.den, a.den * b.den}); }
Rat mul(Rat a, Rat b) { return reduce({a.num * b.num, a.den * b.den}); }

// B+ convention (B1 = +1/2), indices 0..10
constexpr long long kBernoulliNum[11] = {1, 1, 1, 0, -1, 0, 1, 0, -1, 0, 5};
constexpr long long kBernoulliDen[11] = {1, 2, 6, 1, 30, 1, 42, 1, 30, 1, 66};

__int128 binomial(int n, int k) {
    __int128 r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

double ipow(double x, int e) {
    double v = 1.0;
    for (int k = 0; k < e; ++k) v *= x;
    return v;
}

} // namespace

__int128 faulhaber_exact(int l, long n) {
    if (l < 0 || l > 10) throw std::invalid_argument("faulhaber: l must be in [0,10]");
    if (n < 0) throw std::invalid_argument("faulhaber: n must be >= 0");
    if ((l + 1) * std::log10(static_cast<double>(n) + 1.0) > 36.0)
        throw std::overflow_error("faulhaber: n^(l+1) exceeds 128-bit range");
    // sum_{j=1..n} j^l = 1/(l+1) sum_k C(l+1,k) B+_k n^(l+1-k)
    Rat acc{0, 1};
    for (int k = 0; k <= l; ++k) {
        __int128 npow = 1;
        for (int e = 0; e < l + 1 - k; ++e) npow *= n;
        Rat term{kBernoulliNum[k] * binomial(l + 1, k), kBernoulliDen[k]};
        acc = add(acc, mul(term, Rat{npow, 1}));
    }
    acc = mul(acc, Rat{1, l + 1});
    if (acc.den != 1) throw std::logic_error("faulhaber: non-integer power sum");
    return acc.num;
}

double faulhaber(int l, long n) {
    if (l < 0 || l > 10) throw std::invalid_argument("faulhaber: l must be in [0,10]");
    if (n < 0) throw std::invalid_argument("faulhaber: n must be >= 0");
    long double acc = 0.0L;
    const auto nd = static_cast<long double>(n);
    for (int k = 0; k <= l; ++k) {
        long double npow = 1.0L;
        for (int e = 0; e < l + 1 - k; ++e) npow *= nd;
        acc += static_cast<long double>(kBernoulliNum[k]) / kBernoulliDen[k] *
               static_cast<long double>(binomial(l + 1, k)) * npow;
    }
    return static_cast<double>(acc / (l + 1));
}

double harmonic(double epsilon, long n) {
    if (n < 1) throw std::invalid_argument("harmonic: n must be >= 1");
    if (epsilon < 0.0) throw std::invalid_argument("harmonic: epsilon must be >= 0");
    if (epsilon == 0.0) return static_cast<double>(n);
    double acc = 0.0;
    for (long j = n; j >= 1; --j) acc += std::pow(static_cast<double>(j), -epsilon);
    return acc;
}

double power_difference_kernel(int l, long i, long j) {
    double acc = 0.0;
    for (int q = 1; q <= l; ++q)
        acc += ipow(static_cast<double>(i), q - 1) * ipow(static_cast<double>(j), l - q);
    return acc;
}

double nonlocal_derivative_closed(const PolySpec& spec, const Mesh1D& mesh, int i,
                                  double epsilon) {
    spec.validate();
    if (i < 0 || i > mesh.n)
        throw std::out_of_range("nonlocal_derivative_closed: training index out of range");
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("nonlocal_derivative_closed: epsilon must be in [0,1)");
    const int n = mesh.n;
    const double two_h = 2.0 * mesh.h;
    const double c_eps = (1.0 - epsilon) * std::pow(mesh.L / 2.0, epsilon);

    double total = 0.0;
    for (int l = 1; l <= spec.degree(); ++l) {
        const double al = spec.alpha[static_cast<std::size_t>(l)];
        if (al == 0.0) continue;
        double inner;
        if (epsilon == 0.0) {
            // sum_{j=0..n, j!=i} p_l[i,j] via power-sum closed forms; the full
            // sum over j=0..n of j^m is faulhaber(m,n) plus the j=0 term for m=0.
            inner = 0.0;
            for (int q = 1; q <= l; ++q) {
                const int m = l - q;
                const double full = faulhaber(m, n) + (m == 0 ? 1.0 : 0.0);
                inner += ipow(static_cast<double>(i), q - 1) *
                         (full - ipow(static_cast<double>(i), m));
            }
        } else {
            inner = 0.0;
            for (int j = 0; j <= n; ++j) {
                if (j == i) continue;
                inner += power_difference_kernel(l, i, j) /
                         std::pow(std::abs(static_cast<double>(j - i)), epsilon);
            }
        }
        total += al * std::pow(two_h, static_cast<double>(l) - 1.0 - epsilon) * inner;
    }
    return c_eps / static_cast<double>(n) * total;
}

namespace {

StateGraph training_graph(const Mesh1D& mesh, double epsilon) {
    std::vector<StateVector> states(mesh.training.size());
    for (std::size_t i = 0; i < mesh.training.size(); ++i)
        states[i] = StateVector{{mesh.training[i]}, {"x"}};
    WeightSpec spec;
    spec.family = WeightFamily::Polynomial;
    spec.p = 1;
    spec.R = 0.0;  // auto: graph radius, L/2 here
    spec.epsilon = epsilon;
    return StateGraph::build(std::move(states), {}, spec);
}

VertexFunction sample_training(const PolySpec& spec, const Mesh1D& mesh) {
    VertexFunction f(static_cast<Eigen::Index>(mesh.training.size()));
    for (std::size_t i = 0; i < mesh.training.size(); ++i) f[i] = spec.eval(mesh.training[i]);
    return f;
}

} // namespace

double oracle_match_graph_derivative(const PolySpec& spec, const Mesh1D& mesh, double epsilon) {
    const StateGraph g = training_graph(mesh, epsilon);
    const VertexFunction f = sample_training(spec, mesh);
    const VertexFunction d = partial_derivative(g, f, DerivativeRequest{{0}});
    double max_dev = 0.0;
    for (int i = 0; i <= mesh.n; ++i)
        max_dev = std::max(max_dev, std::abs(d[i] - nonlocal_derivative_closed(spec, mesh, i,
                                                                               epsilon)));
    return max_dev;
}

double fit_gamma1(const PolySpec& spec, const Mesh1D& mesh, int i) {
    if (i < 0 || i > mesh.n) throw std::out_of_range("fit_gamma1: training index out of range");
    const double D = nonlocal_derivative_closed(spec, mesh, i, 0.0);
    const double xi = mesh.training[static_cast<std::size_t>(i)];
    const double ui = spec.eval(xi);
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= mesh.n; ++j) {
        if (j == i) continue;
        const double b = D * (mesh.training[static_cast<std::size_t>(j)] - xi);
        const double d = spec.eval(mesh.training[static_cast<std::size_t>(j)]) - ui;
        num += b * d;
        den += b * b;
    }
    if (den == 0.0) throw std::invalid_argument("fit_gamma1: degenerate design (all b zero)");
    return num / den;
}

double gamma1_quadratic_limit(double L, double a1, double a2) {
    if (a1 == 0.0) throw std::invalid_argument("gamma1_quadratic_limit: a1 must be nonzero");
    const double r = L * a2 / a1;
    return (1.0 + 0.75 * r) / (1.0 + 0.5 * r);
}

namespace {

double aggregate(const std::vector<double>& abs_err, ErrorNorm norm) {
    const auto n = static_cast<double>(abs_err.size());
    double acc = 0.0;
    switch (norm) {
        case ErrorNorm::L1:
            for (double e : abs_err) acc += e;
            return acc / n;
        case ErrorNorm::L2:
            for (double e : abs_err) acc += e * e;
            return std::sqrt(acc / n);
        case ErrorNorm::Linf:
            for (double e : abs_err) acc = std::max(acc, e);
            return acc;
    }
    throw std::logic_error("aggregate: unknown norm");
}

double selected(const StudyRecord& r, ErrorNorm norm) {
    switch (norm) {
        case ErrorNorm::L1: return r.error_l1;
        case ErrorNorm::L2: return r.error_l2;
        case ErrorNorm::Linf: return r.error_linf;
    }
    throw std::logic_error("selected: unknown norm");
}

} // namespace

StudyResult convergence_study(const PolySpec& spec, int k, double L,
                              const std::vector<int>& n_list, double epsilon,
                              ErrorNorm norm, DerivativeMode mode) {
    spec.validate();
    if (k < 1) throw std::invalid_argument("convergence_study: model order must be >= 1");
    if (n_list.size() < 3) throw std::invalid_argument("convergence_study: need >= 3 mesh sizes");

    StudyResult result;
    result.norm = norm;
    for (int n : n_list) {
        const Mesh1D mesh = Mesh1D::build(n, L);

        // derivatives of orders 1..k at every training vertex
        Eigen::MatrixXd deriv(n + 1, k);
        if (mode == DerivativeMode::NonLocal) {
            const StateGraph g = training_graph(mesh, epsilon);
            DerivativeCache cache(g, sample_training(spec, mesh));
            std::vector<int> idx;
            for (int q = 1; q <= k; ++q) {
                idx.push_back(0);
                deriv.col(q - 1) = cache.get(idx);
            }
        } else {
            for (int i = 0; i <= n; ++i)
                for (int q = 1; q <= k; ++q)
                    deriv(i, q - 1) = spec.derivative(mesh.training[i], q);
        }

        // per-base coefficients on the order-q displacement columns, constant
        // term pinned; the exact-derivative baseline keeps them at 1
        Eigen::MatrixXd gamma = Eigen::MatrixXd::Ones(n + 1, k);
        if (mode == DerivativeMode::NonLocal) {
            for (int i = 0; i <= n; ++i) {
                Eigen::MatrixXd B(n, k);
                Eigen::VectorXd d(n);
                int row = 0;
                for (int j = 0; j <= n; ++j) {
                    if (j == i) continue;
                    const double dx = mesh.training[j] - mesh.training[i];
                    double fact = 1.0;
                    for (int q = 1; q <= k; ++q) {
                        fact *= q;
                        B(row, q - 1) = deriv(i, q - 1) * ipow(dx, q) / fact;
                    }
                    d[row] = spec.eval(mesh.training[j]) - spec.eval(mesh.training[i]);
                    ++row;
                }
                gamma.row(i) = ols_fit(B, d).transpose();
            }
        }

        std::vector<double> abs_err(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
            const int base = m;  // training point directly to the left
            const double dx = mesh.testing[m] - mesh.training[base];  // == h
            double model = spec.eval(mesh.training[base]);
            double fact = 1.0;
            for (int q = 1; q <= k; ++q) {
                fact *= q;
                model += gamma(base, q - 1) * deriv(base, q - 1) * ipow(dx, q) / fact;
            }
            abs_err[static_cast<std::size_t>(m)] = std::abs(spec.eval(mesh.testing[m]) - model);
        }

        StudyRecord rec;
        rec.n = n;
        rec.h = mesh.h;
        rec.error_l1 = aggregate(abs_err, ErrorNorm::L1);
        rec.error_l2 = aggregate(abs_err, ErrorNorm::L2);
        rec.error_linf = aggregate(abs_err, ErrorNorm::Linf);
        result.records.push_back(rec);
    }

    // floor detection: trailing (smallest-h) records whose selected error
    // moves by < 5% across a halving are excluded from the slope window
    auto& recs = result.records;
    std::size_t window_end = recs.size();
    while (window_end >= 2) {
        const double e_small = selected(recs[window_end - 1], norm);
        const double e_large = selected(recs[window_end - 2], norm);
        if (e_large == 0.0) break;
        if (std::abs(e_small / e_large - 1.0) < 0.05) {
            recs[window_end - 1].in_slope_window = false;
            result.floor_value = selected(recs[window_end - 1], norm);
            --window_end;
        } else {
            break;
        }
    }
    if (window_end < 2) window_end = 2;  // always fit over at least two points

    Eigen::MatrixXd A(static_cast<Eigen::Index>(window_end), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(window_end));
    for (std::size_t r = 0; r < window_end; ++r) {
        recs[r].in_slope_window = true;
        A(static_cast<Eigen::Index>(r), 0) = 1.0;
        A(static_cast<Eigen::Index>(r), 1) = std::log(recs[r].h);
        b[static_cast<Eigen::Index>(r)] = std::log(std::max(selected(recs[r], norm), 1e-300));
    }
    result.slope = ols_fit(A, b)[1];
    return result;
}

} // namespace graphrom::errorlab
