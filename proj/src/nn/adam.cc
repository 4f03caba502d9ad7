#include "mlsl/nn/adam.h"

#include <cmath>

namespace mlsl::nn {

Adam::Adam(const ParamStore &store, const AdamConfig &config) : config_(config) {
  for (const Param &p : store.all()) {
    m_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    v_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
}

void Adam::Step(ParamStore *store) {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  std::vector<Param> &params = store->all();
  for (size_t k = 0; k < params.size(); ++k) {
    const Matrix &g = params[k].grad;
    m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
    v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g.cwiseAbs2();
    params[k].value.array() -=
        config_.learning_rate * (m_[k].array() / c1) /
        ((v_[k].array() / c2).sqrt() + config_.epsilon);
  }
}

}  // namespace mlsl::nn
