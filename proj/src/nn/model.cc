#include "mlsl/nn/model.h"

#include <string>

#include "mlsl/error.h"

namespace mlsl::nn {
namespace {

std::vector<int> ArgInts(const std::vector<ArgLabel> &labels) {
  std::vector<int> out(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) out[i] = static_cast<int>(labels[i]);
  return out;
}

// (P - onehot(gold)) / n
Matrix SoftmaxGrad(const Matrix &probs, const std::vector<int> &gold) {
  Matrix d = probs;
  for (size_t i = 0; i < gold.size(); ++i) d(i, gold[i]) -= 1.0;
  return d / static_cast<double>(gold.size());
}

}  // namespace

Model::Model(const ModelConfig &config, TriggerLabelSpace space, int vocab_size)
    : config_(config),
      space_(std::move(space)),
      vocab_size_(vocab_size),
      store_(std::make_unique<ParamStore>()) {
  const MergingConfig &mc = config_.merging;
  if (mc.heads < 1 || mc.head_size < 1 || config_.hidden < 1) {
    throw Error(ErrorCode::kShapeMismatch, "hidden, heads and head_size must be positive");
  }
  const int d = config_.hidden;
  const int y = space_.size();
  encoder_ = std::make_unique<ToyEncoder>(store_.get(), vocab_size, d,
                                          config_.max_length);
  w_tr_ = store_->Add("trigger.weight", d, y);
  b_tr_ = store_->Add("trigger.bias", 1, y);
  label_emb_ = -1;
  if (mc.strategy != MergeStrategy::kNone) {
    label_emb_ = store_->Add("label_embedding", y, d);
  }
  if (mc.strategy == MergeStrategy::kSelfAttention) {
    for (int h = 0; h < mc.heads; ++h) {
      const std::string suffix = "." + std::to_string(h);
      w_q_.push_back(store_->Add("merge.query" + suffix, mc.head_size, 2 * d));
      w_k_.push_back(store_->Add("merge.key" + suffix, mc.head_size, 2 * d));
      w_v_.push_back(store_->Add("merge.value" + suffix, mc.head_size, 2 * d));
    }
  }
  const int m = d + MergedPartWidth(mc, 2 * d);
  w_t_ = store_->Add("theme.weight", m, kNumArgLabels);
  b_t_ = store_->Add("theme.bias", 1, kNumArgLabels);
  w_c_ = store_->Add("cause.weight", m, kNumArgLabels);
  b_c_ = store_->Add("cause.bias", 1, kNumArgLabels);
}

void Model::Init(Rng *rng) {
  encoder_->Init(rng);
  ParamStore &s = *store_;
  XavierInit(&s[w_tr_].value, rng);
  s[b_tr_].value.setZero();
  if (label_emb_ >= 0) NormalInit(&s[label_emb_].value, 0.5, rng);
  for (size_t h = 0; h < w_q_.size(); ++h) {
    XavierInit(&s[w_q_[h]].value, rng);
    XavierInit(&s[w_k_[h]].value, rng);
    XavierInit(&s[w_v_[h]].value, rng);
  }
  XavierInit(&s[w_t_].value, rng);
  s[b_t_].value.setZero();
  XavierInit(&s[w_c_].value, rng);
  s[b_c_].value.setZero();
}

SelfAttentionWeights Model::AttentionWeights() const {
  SelfAttentionWeights w;
  for (size_t h = 0; h < w_q_.size(); ++h) {
    w.query.push_back((*store_)[w_q_[h]].value);
    w.key.push_back((*store_)[w_k_[h]].value);
    w.value.push_back((*store_)[w_v_[h]].value);
  }
  return w;
}

Matrix Model::Merge(const Matrix &roles, const CandidateSet &candidates,
                    const Matrix &hidden) const {
  switch (config_.merging.strategy) {
    case MergeStrategy::kNone:
      return hidden;
    case MergeStrategy::kAverage:
      return MergeAverage(roles, candidates, hidden);
    case MergeStrategy::kAttention:
      return MergeAttention(roles, candidates, hidden);
    case MergeStrategy::kSelfAttention:
      return MergeSelfAttention(roles, candidates, hidden, AttentionWeights(),
                                config_.merging);
  }
  return hidden;
}

std::vector<int> Model::ResolveTriggerLabels(const TokenizedSentence &sentence,
                                             const Matrix &trigger_probs) const {
  const int n = sentence.size();
  std::vector<int> labels(n, TriggerLabelSpace::kOutside);
  for (int i = 0; i < n; ++i) {
    if (sentence.is_entity_mask[i]) {
      labels[i] = space_.EntityBegin(sentence.entity_types[i]);
      continue;
    }
    if (i == 0 && sentence.special_head) continue;
    double best = -1.0;
    for (int y = 0; y < space_.size(); ++y) {
      if (space_.IsEntity(y)) continue;
      if (trigger_probs(i, y) > best) {
        best = trigger_probs(i, y);
        labels[i] = y;
      }
    }
  }
  return labels;
}

ForwardPass Model::Forward(const TokenizedSentence &sentence,
                           const LabelFrame *gold, Rng *rng) const {
  const ParamStore &s = *store_;
  ForwardPass pass;
  const double dropout = rng != nullptr ? config_.dropout : 0.0;
  const double layer_dropout = rng != nullptr ? config_.layer_dropout : 0.0;
  pass.hidden = encoder_->Forward(sentence.token_ids, dropout, layer_dropout,
                                  rng, &pass.encoder);
  pass.trigger = TriggerForward(pass.hidden, s[w_tr_].value,
                                RowVector(s[b_tr_].value.row(0)));
  if (gold != nullptr) {
    if (gold->size() != sentence.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "label frame has " + std::to_string(gold->size()) +
                      " tokens, sentence " + std::to_string(sentence.size()));
    }
    pass.role_labels = gold->trigger;
  } else {
    pass.role_labels = ResolveTriggerLabels(sentence, pass.trigger.probs);
  }
  if (config_.merging.strategy == MergeStrategy::kNone) {
    pass.merged = pass.hidden;
  } else {
    pass.roles =
        RoleRepresentation(pass.hidden, pass.role_labels, s[label_emb_].value);
    pass.candidates = BuildCandidates(pass.role_labels, space_);
    pass.merged = Merge(pass.roles, pass.candidates, pass.hidden);
  }
  pass.theme = ArgForward(pass.merged, s[w_t_].value,
                          RowVector(s[b_t_].value.row(0)));
  pass.cause = ArgForward(pass.merged, s[w_c_].value,
                          RowVector(s[b_c_].value.row(0)));
  return pass;
}

double Model::Loss(const ForwardPass &pass, const LabelFrame &gold) const {
  return MultiLayerLoss(pass.trigger.probs, pass.theme.probs, pass.cause.probs,
                        gold);
}

void Model::Backward(const ForwardPass &pass, const LabelFrame &gold) {
  ParamStore &s = *store_;
  const int d = config_.hidden;
  const Matrix &hidden = pass.hidden;

  Matrix d_tr = SoftmaxGrad(pass.trigger.probs, gold.trigger);
  Matrix d_t = SoftmaxGrad(pass.theme.probs, ArgInts(gold.theme));
  Matrix d_c = SoftmaxGrad(pass.cause.probs, ArgInts(gold.cause));

  s[w_tr_].grad += hidden.transpose() * d_tr;
  s[b_tr_].grad += d_tr.colwise().sum();
  Matrix d_hidden = d_tr * s[w_tr_].value.transpose();

  s[w_t_].grad += pass.merged.transpose() * d_t;
  s[b_t_].grad += d_t.colwise().sum();
  s[w_c_].grad += pass.merged.transpose() * d_c;
  s[b_c_].grad += d_c.colwise().sum();
  Matrix d_merged = d_t * s[w_t_].value.transpose() + d_c * s[w_c_].value.transpose();
  d_hidden += d_merged.leftCols(d);

  if (config_.merging.strategy != MergeStrategy::kNone) {
    Matrix d_part = d_merged.rightCols(d_merged.cols() - d);
    Matrix d_roles = Matrix::Zero(pass.roles.rows(), pass.roles.cols());
    switch (config_.merging.strategy) {
      case MergeStrategy::kAverage:
        MergeAverageBackward(pass.candidates, d_part, &d_roles);
        break;
      case MergeStrategy::kAttention:
        MergeAttentionBackward(pass.roles, pass.candidates, d_part, &d_roles);
        break;
      case MergeStrategy::kSelfAttention: {
        SelfAttentionWeights w = AttentionWeights();
        SelfAttentionWeights dw;
        for (size_t h = 0; h < w_q_.size(); ++h) {
          dw.query.push_back(Matrix::Zero(w.query[h].rows(), w.query[h].cols()));
          dw.key.push_back(Matrix::Zero(w.key[h].rows(), w.key[h].cols()));
          dw.value.push_back(Matrix::Zero(w.value[h].rows(), w.value[h].cols()));
        }
        MergeSelfAttentionBackward(pass.roles, pass.candidates, w,
                                   config_.merging, d_part, &d_roles, &dw);
        for (size_t h = 0; h < w_q_.size(); ++h) {
          s[w_q_[h]].grad += dw.query[h];
          s[w_k_[h]].grad += dw.key[h];
          s[w_v_[h]].grad += dw.value[h];
        }
        break;
      }
      case MergeStrategy::kNone:
        break;
    }
    for (size_t i = 0; i < pass.role_labels.size(); ++i) {
      s[label_emb_].grad.row(pass.role_labels[i]) += d_roles.row(i).head(d);
    }
    d_hidden += d_roles.rightCols(d);
  }
  encoder_->Backward(pass.encoder, d_hidden);
}

double Model::EvalLoss(const TokenizedSentence &sentence,
                       const LabelFrame &gold) const {
  return Loss(Forward(sentence, &gold, nullptr), gold);
}

LabelFrame Model::Predict(const TokenizedSentence &sentence) const {
  ForwardPass pass = Forward(sentence, nullptr, nullptr);
  LabelFrame frame;
  frame.trigger = pass.role_labels;
  frame.theme.resize(sentence.size());
  frame.cause.resize(sentence.size());
  for (int i = 0; i < sentence.size(); ++i) {
    frame.theme[i] = static_cast<ArgLabel>(pass.theme.labels[i]);
    frame.cause[i] = static_cast<ArgLabel>(pass.cause.labels[i]);
  }
  return frame;
}

}  // namespace mlsl::nn
