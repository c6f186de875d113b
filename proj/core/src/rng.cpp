#include "irf/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace irf {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform_open() {
  // 53 random bits shifted by half an ulp: never 0, never 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

double Rng::normal() { return normal_(engine_); }

int Rng::sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

double Rng::laplace() {
  const double u = uniform_open() - 0.5;
  return u < 0 ? std::log1p(2.0 * u) : -std::log1p(-2.0 * u);
}

Eigen::VectorXd sample_unit_sphere(Rng& rng, int dim) {
  if (dim < 1) throw std::invalid_argument("sample_unit_sphere: dimension must be >= 1");
  Eigen::VectorXd v(dim);
  if (dim == 1) {
    v(0) = rng.uniform_open() < 0.5 ? -1.0 : 1.0;
    return v;
  }
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v(i) = rng.normal();
    norm = v.norm();
  } while (norm < 1e-300);
  return v / norm;
}

}  // namespace irf
