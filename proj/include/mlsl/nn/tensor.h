#ifndef MLSL_NN_TENSOR_H_
#define MLSL_NN_TENSOR_H_

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mlsl::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Seeded generator with platform-independent uniform/normal draws.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double Uniform() { return (engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal() {
    double u1 = Uniform();
    double u2 = Uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  // Uniform integer in [0, n).
  uint64_t Below(uint64_t n) { return engine_() % n; }
  uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mlsl::nn

#endif  // MLSL_NN_TENSOR_H_
