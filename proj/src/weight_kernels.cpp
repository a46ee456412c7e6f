#include "graphrom/weight_kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace graphrom {

namespace {

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

} // namespace

void WeightSpec::validate() const {
    if (p < 1) throw std::invalid_argument("WeightSpec: p must be >= 1");
    if (!(R > 0.0)) throw std::invalid_argument("WeightSpec: R must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("WeightSpec: sigma must be > 0");
    if (family == WeightFamily::Polynomial) {
        if (epsilon < 0.0 || epsilon >= static_cast<double>(p))
            throw std::invalid_argument("WeightSpec: polynomial family requires 0 <= epsilon < p");
    }
    if (!auto_scale && !(C > 0.0))
        throw std::invalid_argument("WeightSpec: C must be > 0 when not auto");
}

double gaussian_moment(int p, double z) {
    if (p < -2) throw std::invalid_argument("gaussian_moment: p must be >= -2");
    if (!(z > 0.0)) throw std::invalid_argument("gaussian_moment: z must be > 0");
    switch (p) {
        case -2: return 0.0;
        case -1: return std::sqrt(2.0 * std::numbers::pi) * (std_normal_cdf(z) - 0.5);
        case 0:  return 1.0 - std::exp(-0.5 * z * z);
        default: break;
    }
    // Wtilde[p,z] = p*Wtilde[p-2,z] - z^p exp(-z^2/2)
    return static_cast<double>(p) * gaussian_moment(p - 2, z)
           - std::pow(z, p) * std::exp(-0.5 * z * z);
}

double polynomial_moment(int p, double z, double epsilon) {
    if (p < 1) throw std::invalid_argument("polynomial_moment: p must be >= 1");
    if (!(z > 0.0)) throw std::invalid_argument("polynomial_moment: z must be > 0");
    if (epsilon < 0.0 || epsilon >= static_cast<double>(p))
        throw std::invalid_argument("polynomial_moment: requires 0 <= epsilon < p");
    const double pe = static_cast<double>(p) - epsilon;
    return std::pow(z, pe) / pe;
}

double weight_scale(const WeightSpec& spec) {
    if (!(spec.sigma > 0.0) || !(spec.R > 0.0))
        throw std::invalid_argument("weight_scale: degenerate sigma or R");
    const double z = spec.R / spec.sigma;
    const double moment = (spec.family == WeightFamily::Gaussian)
                              ? gaussian_moment(spec.p, z)
                              : polynomial_moment(spec.p, z, spec.epsilon);
    return std::pow(z, spec.p) / (spec.sigma * spec.sigma) / moment;
}

WeightSpec resolve_scale(WeightSpec spec) {
    spec.validate();
    if (spec.auto_scale) {
        spec.C = weight_scale(spec);
        spec.auto_scale = false;
    }
    return spec;
}

double eval_weight(const WeightSpec& spec, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("eval_weight: r must be > 0");
    const double c = spec.auto_scale ? weight_scale(spec) : spec.C;
    if (spec.family == WeightFamily::Gaussian) {
        if (r > spec.R) return 0.0;
        return c * std::exp(-0.5 * (r / spec.sigma) * (r / spec.sigma));
    }
    return c * std::pow(spec.sigma / r, 2.0 + spec.epsilon);
}

double inflection_radius(int p) {
    if (p < 1) throw std::invalid_argument("inflection_radius: p must be >= 1");
    const double pd = static_cast<double>(p);
    return std::sqrt(pd + 1.5 + std::sqrt(2.0 * pd + 4.5));
}

std::int64_t gauss_circle_count(double R, int p) {
    if (R < 0.0) throw std::invalid_argument("gauss_circle_count: R must be >= 0");
    if (p < 1 || p > 3) throw std::invalid_argument("gauss_circle_count: p must be in {1,2,3}");
    const double R2 = R * R;
    const auto M = static_cast<std::int64_t>(std::floor(R));
    if (p == 1) return 2 * M + 1;
    if (p == 2) {
        // N = 1 + 2^p sum_{i=0}^{floor(R)} floor(sqrt(R^2 - i^2))
        std::int64_t s = 0;
        for (std::int64_t i = 0; i <= M; ++i)
            s += static_cast<std::int64_t>(std::floor(std::sqrt(R2 - static_cast<double>(i * i))));
        return 1 + 4 * s;
    }
    // p == 3: direct enumeration over one octant-symmetric loop
    std::int64_t count = 0;
    for (std::int64_t x = -M; x <= M; ++x)
        for (std::int64_t y = -M; y <= M; ++y) {
            const double rem = R2 - static_cast<double>(x * x + y * y);
            if (rem < 0.0) continue;
            count += 2 * static_cast<std::int64_t>(std::floor(std::sqrt(rem))) + 1;
        }
    return count;
}

std::pair<double, double> ball_volume_surface(int p, double R) {
    if (p < 1) throw std::invalid_argument("ball_volume_surface: p must be >= 1");
    if (!(R > 0.0)) throw std::invalid_argument("ball_volume_surface: R must be > 0");
    const double pd = static_cast<double>(p);
    const double unit_vol = std::pow(std::numbers::pi, pd / 2.0) / std::tgamma(pd / 2.0 + 1.0);
    const double volume = unit_vol * std::pow(R, pd);
    const double surface = pd * unit_vol * std::pow(R, pd - 1.0);
    return {volume, surface};
}

} // namespace graphrom
