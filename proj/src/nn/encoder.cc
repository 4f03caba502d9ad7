#include "mlsl/nn/encoder.h"

#include <cmath>
#include <string>

#include "mlsl/error.h"

namespace mlsl::nn {

Matrix DropoutMask(int rows, int cols, double p, Rng *rng) {
  Matrix mask(rows, cols);
  const double keep = 1.0 / (1.0 - p);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) mask(r, c) = rng->Uniform() < p ? 0.0 : keep;
  }
  return mask;
}

void XavierInit(Matrix *m, Rng *rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(m->rows() + m->cols()));
  for (int c = 0; c < m->cols(); ++c) {
    for (int r = 0; r < m->rows(); ++r) (*m)(r, c) = rng->Uniform(-a, a);
  }
}

void NormalInit(Matrix *m, double stddev, Rng *rng) {
  for (int c = 0; c < m->cols(); ++c) {
    for (int r = 0; r < m->rows(); ++r) (*m)(r, c) = stddev * rng->Normal();
  }
}

ToyEncoder::ToyEncoder(ParamStore *store, int vocab_size, int hidden,
                       int max_length)
    : store_(store), hidden_(hidden), max_length_(max_length) {
  tok_emb_ = store->Add("encoder.token_embedding", vocab_size, hidden);
  pos_emb_ = store->Add("encoder.position_embedding", max_length, hidden);
  w_self_ = store->Add("encoder.w_self", hidden, hidden);
  w_prev_ = store->Add("encoder.w_prev", hidden, hidden);
  w_next_ = store->Add("encoder.w_next", hidden, hidden);
  bias_ = store->Add("encoder.bias", 1, hidden);
}

void ToyEncoder::Init(Rng *rng) {
  ParamStore &s = *store_;
  NormalInit(&s[tok_emb_].value, 0.5, rng);
  Matrix &pos = s[pos_emb_].value;
  for (int p = 0; p < pos.rows(); ++p) {
    for (int k = 0; k < hidden_; ++k) {
      const double rate = std::pow(10000.0, -static_cast<double>(k - k % 2) / hidden_);
      pos(p, k) = k % 2 == 0 ? std::sin(p * rate) : std::cos(p * rate);
    }
  }
  XavierInit(&s[w_self_].value, rng);
  XavierInit(&s[w_prev_].value, rng);
  XavierInit(&s[w_next_].value, rng);
  s[bias_].value.setZero();
}

Matrix ToyEncoder::Encode(std::span<const int> token_ids) const {
  return Forward(token_ids, 0.0, 0.0, nullptr, nullptr);
}

Matrix ToyEncoder::Forward(std::span<const int> token_ids, double dropout,
                           double layer_dropout, Rng *rng,
                           EncoderCache *cache) const {
  const int n = static_cast<int>(token_ids.size());
  if (n > max_length_) {
    throw Error(ErrorCode::kSequenceTooLong,
                std::to_string(n) + " tokens exceed the encoder limit of " +
                    std::to_string(max_length_));
  }
  const ParamStore &s = *store_;
  const Matrix &emb = s[tok_emb_].value;
  Matrix x(n, hidden_);
  for (int i = 0; i < n; ++i) {
    if (token_ids[i] < 0 || token_ids[i] >= emb.rows()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "token id " + std::to_string(token_ids[i]) +
                      " outside vocabulary of " + std::to_string(emb.rows()));
    }
    x.row(i) = emb.row(token_ids[i]) + s[pos_emb_].value.row(i);
  }
  Matrix emb_mask, out_mask;
  if (dropout > 0.0 && rng != nullptr) {
    emb_mask = DropoutMask(n, hidden_, dropout, rng);
    x = x.cwiseProduct(emb_mask);
  }

  Matrix pre = x * s[w_self_].value;
  pre.rowwise() += RowVector(s[bias_].value.row(0));
  if (n > 1) {
    pre.bottomRows(n - 1) += x.topRows(n - 1) * s[w_prev_].value;
    pre.topRows(n - 1) += x.bottomRows(n - 1) * s[w_next_].value;
  }
  Matrix mixed = pre.array().tanh().matrix();
  Matrix h = mixed;
  if (layer_dropout > 0.0 && rng != nullptr) {
    out_mask = DropoutMask(n, hidden_, layer_dropout, rng);
    h = h.cwiseProduct(out_mask);
  }
  if (cache != nullptr) {
    cache->ids.assign(token_ids.begin(), token_ids.end());
    cache->x = std::move(x);
    cache->mixed = std::move(mixed);
    cache->emb_mask = std::move(emb_mask);
    cache->out_mask = std::move(out_mask);
  }
  return h;
}

void ToyEncoder::Backward(const EncoderCache &cache, const Matrix &d_hidden) {
  ParamStore &s = *store_;
  const int n = static_cast<int>(cache.ids.size());
  Matrix d_mixed = d_hidden;
  if (cache.out_mask.size() > 0) d_mixed = d_mixed.cwiseProduct(cache.out_mask);
  Matrix d_pre =
      d_mixed.cwiseProduct((1.0 - cache.mixed.array().square()).matrix());

  const Matrix &x = cache.x;
  s[w_self_].grad += x.transpose() * d_pre;
  s[bias_].grad += d_pre.colwise().sum();
  Matrix dx = d_pre * s[w_self_].value.transpose();
  if (n > 1) {
    s[w_prev_].grad += x.topRows(n - 1).transpose() * d_pre.bottomRows(n - 1);
    s[w_next_].grad += x.bottomRows(n - 1).transpose() * d_pre.topRows(n - 1);
    dx.topRows(n - 1) += d_pre.bottomRows(n - 1) * s[w_prev_].value.transpose();
    dx.bottomRows(n - 1) += d_pre.topRows(n - 1) * s[w_next_].value.transpose();
  }
  if (cache.emb_mask.size() > 0) dx = dx.cwiseProduct(cache.emb_mask);
  for (int i = 0; i < n; ++i) {
    s[tok_emb_].grad.row(cache.ids[i]) += dx.row(i);
    s[pos_emb_].grad.row(i) += dx.row(i);
  }
}

}  // namespace mlsl::nn
