#include "grain/workload/zipfian.hpp"

#include <cmath>
#include <stdexcept>

namespace grain {

double zeta(std::uint64_t n, double theta) {
  double sum = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    sum += std::pow(static_cast<double>(i), -theta);
  }
  return sum;
}

ZipfianParams::ZipfianParams(std::uint64_t n_, double theta_)
    : n(n_), theta(theta_) {
  if (n == 0) throw std::invalid_argument("zipfian population must be >= 1");
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw std::invalid_argument("zipfian theta must be in [0, 1)");
  }
  zeta_n = zeta(n, theta);
  zeta_2 = zeta(2, theta);
  alpha = 1.0 / (1.0 - theta);
  if (n > 2) {
    eta = (1.0 - std::pow(2.0 / static_cast<double>(n), 1.0 - theta)) /
          (1.0 - zeta_2 / zeta_n);
  }
}

std::uint64_t ZipfianGenerator::next() {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  const double uz = u * params_.zeta_n;
  if (uz < 1.0) return 1;
  if (params_.n >= 2 && uz < 1.0 + std::pow(0.5, params_.theta)) return 2;
  const auto rank =
      1 + static_cast<std::uint64_t>(
              static_cast<double>(params_.n) *
              std::pow(params_.eta * u - params_.eta + 1.0, params_.alpha));
  return rank > params_.n ? params_.n : rank;
}

}  // namespace grain
