#pragma once

#include <cstdint>
#include <random>

namespace grain {

/// Σ_{i=1..n} i^{-theta}.
[[nodiscard]] double zeta(std::uint64_t n, double theta);

/// Constants of the rejection-free Zipfian quantile method (Gray et al.),
/// shared by all generators over the same population.
struct ZipfianParams {
  std::uint64_t n = 1;
  double theta = 0.0;
  double zeta_n = 1.0;
  double zeta_2 = 1.0;
  double alpha = 1.0;
  double eta = 0.0;

  /// Throws std::invalid_argument unless n >= 1 and 0 <= theta < 1.
  ZipfianParams(std::uint64_t n, double theta);
};

/// Draws ranks in [1, n] with P(i) = i^{-theta} / zeta_n. Not thread-safe;
/// give each worker its own generator.
class ZipfianGenerator {
 public:
  ZipfianGenerator(const ZipfianParams& params, std::uint64_t seed)
      : params_(params), rng_(seed) {}
  ZipfianGenerator(std::uint64_t n, double theta, std::uint64_t seed)
      : ZipfianGenerator(ZipfianParams(n, theta), seed) {}

  [[nodiscard]] std::uint64_t next();
  [[nodiscard]] const ZipfianParams& params() const noexcept { return params_; }

 private:
  ZipfianParams params_;
  std::mt19937_64 rng_;
};

}  // namespace grain
