#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pvlab {

/// splitmix64 finalizer; the avalanche constant doubles as the stream-split
/// mixing function documented in the README.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent substream seed from a parent seed and an index.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 1));
}

/// Random stream with hand-rolled distributions so that output is
/// bit-identical across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Box-Muller; caches the second variate.
    double normal(double mean = 0.0, double sd = 1.0) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + sd * spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return mean + sd * r * std::cos(theta);
    }

    /// Marsaglia-Tsang, with the standard alpha < 1 boost.
    double gamma(double alpha) {
        if (alpha < 1.0) {
            double u = uniform();
            if (u < 1e-300) u = 1e-300;
            return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u < 1e-300) u = 1e-300;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Symmetric Dirichlet draw on the (dim-1)-simplex.
    std::vector<double> dirichlet(double alpha, int dim) {
        std::vector<double> w(dim);
        double sum = 0.0;
        for (int i = 0; i < dim; ++i) {
            w[i] = gamma(alpha);
            sum += w[i];
        }
        if (sum <= 0.0) {
            for (double& x : w) x = 1.0 / dim;
            return w;
        }
        for (double& x : w) x /= sum;
        return w;
    }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pvlab
