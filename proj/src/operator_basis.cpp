#include "graphrom/operator_basis.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace graphrom {

std::string TermDescriptor::name() const {
    std::ostringstream os;
    if (is_taylor) {
        os << "T[";
        for (std::size_t m = 0; m < taylor_index.size(); ++m) {
            if (m) os << ",";
            os << taylor_index[m];
        }
        os << "]";
        return os.str();
    }
    bool first = true;
    auto sep = [&] {
        if (!first) os << "*";
        first = false;
    };
    if (derivative) {
        sep();
        os << "d" << derivative->multi_index.size() << "(" << derivative_of << ")/d(";
        for (std::size_t m = 0; m < derivative->multi_index.size(); ++m) {
            if (m) os << ",";
            os << derivative->multi_index[m];
        }
        os << ")";
    }
    if (!special.empty()) {
        sep();
        os << special;
    }
    for (const auto& [var, pow] : powers) {
        if (pow == 0) continue;
        sep();
        os << var;
        if (pow > 1) os << "^" << pow;
    }
    if (first) os << "1";
    return os.str();
}

int TermDescriptor::total_degree() const {
    int d = 0;
    for (const auto& [var, pow] : powers) d += pow;
    return d;
}

std::vector<std::vector<int>> dynamics_derivative_requests(int chem_index,
                                                           const std::vector<int>& strain_indices,
                                                           bool symmetric_pairs) {
    std::vector<std::vector<int>> reqs;
    const int c = chem_index;
    // second order: d2/dc dE_s and d2/dc2
    for (int s : strain_indices) reqs.push_back({c, s});
    reqs.push_back({c, c});
    // third order: d3/dc dE_s dE_t, d3/dc2 dE_s, d3/dc3
    for (std::size_t a = 0; a < strain_indices.size(); ++a) {
        const std::size_t b0 = symmetric_pairs ? a : 0;
        for (std::size_t b = b0; b < strain_indices.size(); ++b)
            reqs.push_back({c, strain_indices[a], strain_indices[b]});
    }
    for (int s : strain_indices) reqs.push_back({c, c, s});
    reqs.push_back({c, c, c});
    return reqs;
}

namespace {

// Exponent vectors with total degree <= cap, graded lexicographic order.
std::vector<std::vector<int>> enumerate_monomials(int nvars, int cap) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(nvars, 0);
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == nvars) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[var] = e;
            self(self, var + 1, remaining - e);
            cur[var] = 0;
        }
    };
    for (int total = 0; total <= cap; ++total) {
        auto rec_total = [&](auto&& self, int var, int remaining) -> void {
            if (var == nvars - 1) {
                cur[var] = remaining;
                out.push_back(cur);
                cur[var] = 0;
                return;
            }
            for (int e = remaining; e >= 0; --e) {
                cur[var] = e;
                self(self, var + 1, remaining - e);
                cur[var] = 0;
            }
        };
        if (nvars == 0) {
            if (total == 0) out.push_back({});
        } else {
            rec_total(rec_total, 0, total);
        }
    }
    (void)rec;
    return out;
}

} // namespace

OperatorBasis build_dynamics_basis(const StateGraph& g, const DynamicsBasisConfig& cfg) {
    if (cfg.degree_cap < 0) throw std::invalid_argument("dynamics basis: degree_cap must be >= 0");
    const int n = g.size();
    for (const auto& v : cfg.polynomial_variables)
        g.observable(v);  // throws for missing observables
    for (const auto& s : cfg.special_columns) g.observable(s);

    // monomial values
    const auto exponents = enumerate_monomials(static_cast<int>(cfg.polynomial_variables.size()),
                                               cfg.degree_cap);
    std::vector<Eigen::VectorXd> monomials;
    monomials.reserve(exponents.size());
    for (const auto& e : exponents) {
        Eigen::VectorXd col = Eigen::VectorXd::Ones(n);
        for (std::size_t v = 0; v < e.size(); ++v)
            for (int k = 0; k < e[v]; ++k)
                col = col.cwiseProduct(g.observable(cfg.polynomial_variables[v]));
        monomials.push_back(std::move(col));
    }

    // derivative factors, evaluated per vertex
    std::vector<Eigen::VectorXd> deriv_cols;
    if (!cfg.derivative_requests.empty()) {
        DerivativeCache cache(g, g.observable(cfg.derivative_function));
        for (const auto& req : cfg.derivative_requests) deriv_cols.push_back(cache.get(req));
    }

    OperatorBasis basis;
    std::set<std::string> seen;
    std::vector<Eigen::VectorXd> cols;
    auto add = [&](TermDescriptor desc, Eigen::VectorXd col) {
        if (!seen.insert(desc.name()).second) return;  // canonical dedup
        basis.descriptors.push_back(std::move(desc));
        cols.push_back(std::move(col));
    };

    auto monomial_desc = [&](const std::vector<int>& e) {
        TermDescriptor d;
        for (std::size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0) d.powers[cfg.polynomial_variables[v]] = e[v];
        return d;
    };

    for (std::size_t m = 0; m < exponents.size(); ++m)
        add(monomial_desc(exponents[m]), monomials[m]);
    for (std::size_t d = 0; d < deriv_cols.size(); ++d)
        for (std::size_t m = 0; m < exponents.size(); ++m) {
            TermDescriptor desc = monomial_desc(exponents[m]);
            desc.derivative = DerivativeRequest{cfg.derivative_requests[d]};
            desc.derivative_of = cfg.derivative_function;
            add(std::move(desc), monomials[m].cwiseProduct(deriv_cols[d]));
        }
    for (const auto& s : cfg.special_columns)
        for (std::size_t m = 0; m < exponents.size(); ++m) {
            TermDescriptor desc = monomial_desc(exponents[m]);
            desc.special = s;
            add(std::move(desc), monomials[m].cwiseProduct(g.observable(s)));
        }

    basis.X.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) basis.X.col(static_cast<Eigen::Index>(c)) = cols[c];
    basis.fixed.assign(cols.size(), false);
    return basis;
}

long taylor_term_count(int q, int k) {
    long total = 0, pw = 1;
    for (int l = 0; l <= k; ++l) {
        total += pw;
        pw *= q;
    }
    return total;
}

OperatorBasis build_taylor_basis(const StateGraph& g, const VertexFunction& f,
                                 const TaylorBasisConfig& cfg) {
    const int n = g.size();
    if (cfg.base_index < 0 || cfg.base_index >= n)
        throw std::invalid_argument("taylor basis: base index out of range");
    if (cfg.order < 0 || cfg.order > 8)
        throw std::invalid_argument("taylor basis: order must be in [0,8]");
    std::vector<int> vars = cfg.variables;
    if (vars.empty())
        for (int a = 0; a < g.dim(); ++a) vars.push_back(a);
    for (int v : vars)
        if (v < 0 || v >= g.dim())
            throw std::invalid_argument("taylor basis: unknown variable index");

    DerivativeCache cache(g, f);
    const int base = cfg.base_index;

    OperatorBasis basis;
    std::vector<Eigen::VectorXd> cols;

    // l = 0: constant base term, the unique fixed column
    {
        TermDescriptor desc;
        desc.is_taylor = true;
        basis.descriptors.push_back(desc);
        cols.push_back(Eigen::VectorXd::Constant(n, f[base]));
        basis.fixed.push_back(true);
    }

    double factorial = 1.0;
    std::vector<std::vector<int>> level = {{}};
    std::set<std::vector<int>> seen_sorted;
    for (int l = 1; l <= cfg.order; ++l) {
        factorial *= l;
        std::vector<std::vector<int>> next;
        for (const auto& prefix : level)
            for (int v : vars) {
                auto idx = prefix;
                idx.push_back(v);
                next.push_back(std::move(idx));
            }
        for (const auto& idx : next) {
            if (cfg.symmetric_dedup) {
                auto key = idx;
                std::sort(key.begin(), key.end());
                if (!seen_sorted.insert(key).second) continue;
            }
            const double dval = cache.get(idx)[base];
            Eigen::VectorXd col(n);
            for (int j = 0; j < n; ++j) {
                double prod = 1.0;
                for (int a : idx) prod *= g.component(j, a) - g.component(base, a);
                col[j] = dval * prod / factorial;  // gamma/l! prefactor folded in
            }
            TermDescriptor desc;
            desc.is_taylor = true;
            desc.taylor_index = idx;
            basis.descriptors.push_back(std::move(desc));
            cols.push_back(std::move(col));
            basis.fixed.push_back(false);
        }
        level = std::move(next);
    }

    basis.X.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) basis.X.col(static_cast<Eigen::Index>(c)) = cols[c];
    return basis;
}

Eigen::VectorXd renormalize_for_new_data(const OperatorBasis& basis_old,
                                         const Eigen::VectorXd& coeffs_old,
                                         const OperatorBasis& basis_new) {
    const int P = basis_old.columns();
    if (basis_new.columns() != P || coeffs_old.size() != P)
        throw std::invalid_argument("renormalize_for_new_data: descriptor count mismatch");
    for (int c = 0; c < P; ++c)
        if (basis_old.descriptors[c].name() != basis_new.descriptors[c].name())
            throw std::invalid_argument("renormalize_for_new_data: descriptor mismatch at column " +
                                        std::to_string(c));
    if (basis_old.col_scale.size() != P || basis_new.col_scale.size() != P)
        throw std::invalid_argument("renormalize_for_new_data: normalizers not attached");

    // gamma' = gamma unnormalized; in the normalized frames
    // gamma_tilde' = N'^-1_X N_X gamma_tilde N_y^-1 N'_y.
    Eigen::VectorXd out(P);
    for (int c = 0; c < P; ++c)
        out[c] = coeffs_old[c] * (basis_old.col_scale[c] / basis_new.col_scale[c]) *
                 (basis_new.target_scale / basis_old.target_scale);
    return out;
}

} // namespace graphrom
