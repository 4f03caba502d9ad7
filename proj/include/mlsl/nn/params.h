#ifndef MLSL_NN_PARAMS_H_
#define MLSL_NN_PARAMS_H_

#include <string>
#include <vector>

#include "mlsl/nn/tensor.h"

namespace mlsl::nn {

struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
};

// Named trainable tensors in registration order. Handles are indices.
class ParamStore {
 public:
  int Add(const std::string &name, int rows, int cols);

  Param &operator[](int handle) { return params_[handle]; }
  const Param &operator[](int handle) const { return params_[handle]; }
  // Returns -1 when absent.
  int Find(const std::string &name) const;

  int size() const { return static_cast<int>(params_.size()); }
  std::vector<Param> &all() { return params_; }
  const std::vector<Param> &all() const { return params_; }

  void ZeroGrad();
  void ScaleGrad(double factor);
  long long Count() const;

 private:
  std::vector<Param> params_;
};

}  // namespace mlsl::nn

#endif  // MLSL_NN_PARAMS_H_
