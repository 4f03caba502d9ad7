#ifndef MLSL_NN_MODEL_H_
#define MLSL_NN_MODEL_H_

#include <memory>
#include <vector>

#include "mlsl/labels.h"
#include "mlsl/schema_codec.h"
#include "mlsl/nn/encoder.h"
#include "mlsl/nn/layers.h"
#include "mlsl/nn/params.h"

namespace mlsl::nn {

struct ModelConfig {
  int hidden = 32;
  int max_length = 512;
  MergingConfig merging;
  double dropout = 0.3;
  double layer_dropout = 0.1;
  // Tokenization convention the model was trained with.
  bool special_head = true;
};

struct ForwardPass {
  EncoderCache encoder;
  Matrix hidden;
  LayerOutput trigger;
  // Labels fed to the role representation.
  std::vector<int> role_labels;
  Matrix roles;
  CandidateSet candidates;
  Matrix merged;
  LayerOutput theme;
  LayerOutput cause;
};

class Model {
 public:
  Model(const ModelConfig &config, TriggerLabelSpace space, int vocab_size);
  Model(Model &&) = default;
  Model &operator=(Model &&) = default;

  void Init(Rng *rng);

  const ModelConfig &config() const { return config_; }
  const TriggerLabelSpace &space() const { return space_; }
  int vocab_size() const { return vocab_size_; }
  ParamStore &params() { return *store_; }
  const ParamStore &params() const { return *store_; }
  const ToyEncoder &encoder() const { return *encoder_; }

  // With `gold` the role representation is built from gold trigger labels;
  // otherwise from resolved predictions. Dropout applies only when `rng` is
  // set.
  ForwardPass Forward(const TokenizedSentence &sentence, const LabelFrame *gold,
                      Rng *rng) const;
  double Loss(const ForwardPass &pass, const LabelFrame &gold) const;
  // Accumulates gradients of Loss(pass, gold).
  void Backward(const ForwardPass &pass, const LabelFrame &gold);

  // Deterministic loss with gold-built role representations.
  double EvalLoss(const TokenizedSentence &sentence, const LabelFrame &gold) const;

  // Labels of the three layers. Entity tokens carry their entity label in the
  // trigger layer.
  LabelFrame Predict(const TokenizedSentence &sentence) const;

  // Predicted trigger layer resolved against the given entities: entity
  // tokens take their entity label, other tokens the best non-entity label.
  std::vector<int> ResolveTriggerLabels(const TokenizedSentence &sentence,
                                        const Matrix &trigger_probs) const;

 private:
  SelfAttentionWeights AttentionWeights() const;
  Matrix Merge(const Matrix &roles, const CandidateSet &candidates,
               const Matrix &hidden) const;

  ModelConfig config_;
  TriggerLabelSpace space_;
  int vocab_size_;
  std::unique_ptr<ParamStore> store_;
  std::unique_ptr<ToyEncoder> encoder_;
  int w_tr_, b_tr_, label_emb_, w_t_, b_t_, w_c_, b_c_;
  std::vector<int> w_q_, w_k_, w_v_;
};

}  // namespace mlsl::nn

#endif  // MLSL_NN_MODEL_H_
