#ifndef MLSL_NN_LAYERS_H_
#define MLSL_NN_LAYERS_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mlsl/labels.h"
#include "mlsl/schema_codec.h"
#include "mlsl/nn/tensor.h"

// Stateless forward/backward operations of the multi-layer labeler. Row i of
// every matrix belongs to token i.
namespace mlsl::nn {

enum class MergeStrategy { kNone, kAverage, kAttention, kSelfAttention };

std::string_view MergeStrategyName(MergeStrategy strategy);
std::optional<MergeStrategy> ParseMergeStrategy(std::string_view name);

struct MergingConfig {
  // Candidate triggers per side.
  static constexpr int kMaxLeft = 2;
  static constexpr int kMaxRight = 2;

  MergeStrategy strategy = MergeStrategy::kSelfAttention;
  int heads = 1;
  int head_size = 32;
};

// Width of the merged candidate part for role rows of width `role_width`.
int MergedPartWidth(const MergingConfig &config, int role_width);

// Row-wise softmax with max subtraction.
Matrix SoftmaxRows(const Matrix &logits);
std::vector<int> ArgmaxRows(const Matrix &probs);

struct LayerOutput {
  Matrix probs;
  std::vector<int> labels;
};

// softmax(h_i W + b) and its argmax, per row. Throws kShapeMismatch.
LayerOutput TriggerForward(const Matrix &hidden, const Matrix &weight,
                           const RowVector &bias);
LayerOutput ArgForward(const Matrix &merged, const Matrix &weight,
                       const RowVector &bias);

// Row i is concat(label_table.row(labels[i]), hidden.row(i)). Throws
// kUnknownLabel for labels outside the table.
Matrix RoleRepresentation(const Matrix &hidden, std::span<const int> labels,
                          const Matrix &label_table);

// Per token: the nearest trigger mentions, at most two on each side (a
// mention containing the token itself is on neither side).
struct CandidateSet {
  struct Mention {
    TokenRange tokens;
    ArgPosition position;
  };
  std::vector<std::vector<Mention>> mentions;
  // Union of the member tokens of `mentions`, ascending.
  std::vector<std::vector<int>> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
};

CandidateSet BuildCandidates(std::span<const int> labels,
                             const TriggerLabelSpace &space);

// Candidate parts (n x width); the full merging representation is
// concat(hidden, part). Tokens without usable candidates get a zero part.
Matrix MergeAveragePart(const Matrix &roles, const CandidateSet &candidates);
Matrix MergeAttentionPart(const Matrix &roles, const CandidateSet &candidates);

struct SelfAttentionWeights {
  // One head_size x role_width matrix per head.
  std::vector<Matrix> query;
  std::vector<Matrix> key;
  std::vector<Matrix> value;
};

Matrix MergeSelfAttentionPart(const Matrix &roles,
                              const CandidateSet &candidates,
                              const SelfAttentionWeights &weights,
                              const MergingConfig &config);

// concat(hidden, part) for the given strategy; `hidden` alone for kNone.
Matrix MergeAverage(const Matrix &roles, const CandidateSet &candidates,
                    const Matrix &hidden);
Matrix MergeAttention(const Matrix &roles, const CandidateSet &candidates,
                      const Matrix &hidden);
Matrix MergeSelfAttention(const Matrix &roles, const CandidateSet &candidates,
                          const Matrix &hidden,
                          const SelfAttentionWeights &weights,
                          const MergingConfig &config);

// Backward passes: accumulate into d_roles (and d_weights) given the gradient
// of the candidate part.
void MergeAverageBackward(const CandidateSet &candidates, const Matrix &d_part,
                          Matrix *d_roles);
void MergeAttentionBackward(const Matrix &roles, const CandidateSet &candidates,
                            const Matrix &d_part, Matrix *d_roles);
void MergeSelfAttentionBackward(const Matrix &roles,
                                const CandidateSet &candidates,
                                const SelfAttentionWeights &weights,
                                const MergingConfig &config,
                                const Matrix &d_part, Matrix *d_roles,
                                SelfAttentionWeights *d_weights);

// Token-averaged cross-entropy of one layer.
double CrossEntropy(const Matrix &probs, std::span<const int> gold);

// L_tr + L_t + L_c. Throws kLengthMismatch.
double MultiLayerLoss(const Matrix &trigger_probs, const Matrix &theme_probs,
                      const Matrix &cause_probs, const LabelFrame &gold);

struct ParamCountQuery {
  MergeStrategy strategy = MergeStrategy::kSelfAttention;
  int hidden = 768;
  int head_size = 768;
  int heads = 1;
  int trigger_labels = 0;
  int arg_labels = kNumArgLabels;
  // Counts self-attention projections over width-`hidden` inputs instead of
  // the width-2*hidden role rows.
  bool hidden_width_projections = false;
};

struct ParamCount {
  long long trigger_layer = 0;
  long long label_embedding = 0;
  long long merging = 0;
  long long theme_layer = 0;
  long long cause_layer = 0;

  long long total() const {
    return trigger_layer + label_embedding + merging + theme_layer + cause_layer;
  }
};

ParamCount CountParams(const ParamCountQuery &query);

}  // namespace mlsl::nn

#endif  // MLSL_NN_LAYERS_H_
