#pragma once

#include <cstdint>
#include <utility>

namespace graphrom {

enum class WeightFamily { Gaussian, Polynomial };

/// Radially symmetric edge-weight specification w(r) = C * wtilde(r / sigma).
///
/// For the polynomial family the fully evaluated weight is independent of
/// sigma once C is derived from the moment constraint:
///   w(r) = (p - epsilon) * R^epsilon / r^(2+epsilon).
struct WeightSpec {
    WeightFamily family = WeightFamily::Polynomial;
    int p = 1;              ///< state dimension
    double R = 1.0;         ///< enclosing radius of the graph
    double sigma = 1.0;     ///< decay length
    double epsilon = 0.0;   ///< super-quadratic exponent, polynomial family only
    double C = 0.0;         ///< weight scale; derived when auto_scale is set
    bool auto_scale = true;

    void validate() const;
};

/// Scaled Gaussian moment Wtilde[p,z] = int_0^z v^(p+1) exp(-v^2/2) dv,
/// evaluated through the moment recursion seeded at p = -2, -1, 0.
double gaussian_moment(int p, double z);

/// Scaled polynomial moment Wtilde[p,z] = z^(p-epsilon) / (p - epsilon).
double polynomial_moment(int p, double z, double epsilon);

/// Weight scale C = (z^p / sigma^2) / Wtilde[p,z] with z = R/sigma.
double weight_scale(const WeightSpec& spec);

/// Evaluate the weight at pairwise distance r > 0. Gaussian weights are
/// truncated to exactly zero beyond R.
double eval_weight(const WeightSpec& spec, double r);

/// Radius z at which the Gaussian moment integrand v^(p+1) exp(-v^2/2)
/// changes curvature: z^2 = p + 3/2 + sqrt(2p + 9/2).
double inflection_radius(int p);

/// Number of integer lattice points with squared norm <= R^2, p in {1,2,3}.
std::int64_t gauss_circle_count(double R, int p);

/// Volume and surface area of the p-ball of radius R; surface = p*volume/R.
std::pair<double, double> ball_volume_surface(int p, double R);

/// Returns a copy of `spec` with C filled in from weight_scale when the spec
/// is marked auto.
WeightSpec resolve_scale(WeightSpec spec);

} // namespace graphrom
