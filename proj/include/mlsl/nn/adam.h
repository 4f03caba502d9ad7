#ifndef MLSL_NN_ADAM_H_
#define MLSL_NN_ADAM_H_

#include <vector>

#include "mlsl/nn/params.h"

namespace mlsl::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(const ParamStore &store, const AdamConfig &config);

  // One bias-corrected update from the accumulated gradients.
  void Step(ParamStore *store);
  long long steps() const { return t_; }

 private:
  AdamConfig config_;
  long long t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

}  // namespace mlsl::nn

#endif  // MLSL_NN_ADAM_H_
