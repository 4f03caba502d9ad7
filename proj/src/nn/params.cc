#include "mlsl/nn/params.h"

namespace mlsl::nn {

int ParamStore::Add(const std::string &name, int rows, int cols) {
  params_.push_back({name, Matrix::Zero(rows, cols), Matrix::Zero(rows, cols)});
  return size() - 1;
}

int ParamStore::Find(const std::string &name) const {
  for (int i = 0; i < size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return -1;
}

void ParamStore::ZeroGrad() {
  for (Param &p : params_) p.grad.setZero();
}

void ParamStore::ScaleGrad(double factor) {
  for (Param &p : params_) p.grad *= factor;
}

long long ParamStore::Count() const {
  long long n = 0;
  for (const Param &p : params_) n += p.value.size();
  return n;
}

}  // namespace mlsl::nn
