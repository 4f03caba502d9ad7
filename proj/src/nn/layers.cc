#include "mlsl/nn/layers.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlsl/error.h"

namespace mlsl::nn {
namespace {

void CheckRows(const Matrix &m, int rows, const char *what) {
  if (m.rows() != rows) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": expected " + std::to_string(rows) +
                    " rows, got " + std::to_string(m.rows()));
  }
}

LayerOutput Classify(const Matrix &input, const Matrix &weight,
                     const RowVector &bias, const char *what) {
  if (input.cols() != weight.rows() || weight.cols() != bias.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": input width " +
                    std::to_string(input.cols()) + " vs weight " +
                    std::to_string(weight.rows()) + "x" +
                    std::to_string(weight.cols()));
  }
  LayerOutput out;
  Matrix logits = input * weight;
  logits.rowwise() += bias;
  out.probs = SoftmaxRows(logits);
  out.labels = ArgmaxRows(out.probs);
  return out;
}

// Candidate tokens of row i for the attention strategy (j != i).
std::vector<int> AttentionSet(const CandidateSet &c, int i) {
  std::vector<int> set;
  for (int j : c.tokens[i]) {
    if (j != i) set.push_back(j);
  }
  return set;
}

Vector Softmax(const Vector &scores) {
  Vector e = (scores.array() - scores.maxCoeff()).exp();
  return e / e.sum();
}

Matrix Gather(const Matrix &rows, const std::vector<int> &idx) {
  Matrix out(idx.size(), rows.cols());
  for (size_t k = 0; k < idx.size(); ++k) out.row(k) = rows.row(idx[k]);
  return out;
}

}  // namespace

std::string_view MergeStrategyName(MergeStrategy strategy) {
  switch (strategy) {
    case MergeStrategy::kNone: return "none";
    case MergeStrategy::kAverage: return "average";
    case MergeStrategy::kAttention: return "attention";
    case MergeStrategy::kSelfAttention: return "self_attention";
  }
  return "none";
}

std::optional<MergeStrategy> ParseMergeStrategy(std::string_view name) {
  for (MergeStrategy s : {MergeStrategy::kNone, MergeStrategy::kAverage,
                          MergeStrategy::kAttention,
                          MergeStrategy::kSelfAttention}) {
    if (MergeStrategyName(s) == name) return s;
  }
  return std::nullopt;
}

int MergedPartWidth(const MergingConfig &config, int role_width) {
  switch (config.strategy) {
    case MergeStrategy::kNone: return 0;
    case MergeStrategy::kAverage:
    case MergeStrategy::kAttention: return role_width;
    case MergeStrategy::kSelfAttention: return config.heads * config.head_size;
  }
  return 0;
}

Matrix SoftmaxRows(const Matrix &logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int i = 0; i < logits.rows(); ++i) {
    RowVector e = (logits.row(i).array() - logits.row(i).maxCoeff()).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

std::vector<int> ArgmaxRows(const Matrix &probs) {
  std::vector<int> labels(probs.rows());
  for (int i = 0; i < probs.rows(); ++i) {
    Eigen::Index best;
    probs.row(i).maxCoeff(&best);
    labels[i] = static_cast<int>(best);
  }
  return labels;
}

LayerOutput TriggerForward(const Matrix &hidden, const Matrix &weight,
                           const RowVector &bias) {
  return Classify(hidden, weight, bias, "trigger layer");
}

LayerOutput ArgForward(const Matrix &merged, const Matrix &weight,
                       const RowVector &bias) {
  return Classify(merged, weight, bias, "argument layer");
}

Matrix RoleRepresentation(const Matrix &hidden, std::span<const int> labels,
                          const Matrix &label_table) {
  CheckRows(hidden, static_cast<int>(labels.size()), "role representation");
  const int n = static_cast<int>(hidden.rows());
  const int le = static_cast<int>(label_table.cols());
  Matrix roles(n, le + hidden.cols());
  for (int i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= label_table.rows()) {
      throw Error(ErrorCode::kUnknownLabel,
                  "label id " + std::to_string(labels[i]) + " at token " +
                      std::to_string(i));
    }
    roles.row(i).head(le) = label_table.row(labels[i]);
    roles.row(i).tail(hidden.cols()) = hidden.row(i);
  }
  return roles;
}

CandidateSet BuildCandidates(std::span<const int> labels,
                             const TriggerLabelSpace &space) {
  const int n = static_cast<int>(labels.size());
  std::vector<TriggerRun> runs = ExtractTriggerRuns(labels, space);
  CandidateSet out;
  out.mentions.resize(n);
  out.tokens.resize(n);
  for (int i = 0; i < n; ++i) {
    // Runs are in token order: scan left side backwards, right side forwards.
    int rank = 0;
    for (int r = static_cast<int>(runs.size()) - 1;
         r >= 0 && rank < MergingConfig::kMaxLeft; --r) {
      if (runs[r].tokens.end <= i) {
        out.mentions[i].push_back({runs[r].tokens, {Direction::kLeft, ++rank}});
      }
    }
    rank = 0;
    for (int r = 0; r < static_cast<int>(runs.size()) &&
                    rank < MergingConfig::kMaxRight;
         ++r) {
      if (runs[r].tokens.begin > i) {
        out.mentions[i].push_back(
            {runs[r].tokens, {Direction::kRight, ++rank}});
      }
    }
    for (const CandidateSet::Mention &m : out.mentions[i]) {
      for (int t = m.tokens.begin; t < m.tokens.end; ++t) {
        out.tokens[i].push_back(t);
      }
    }
    std::sort(out.tokens[i].begin(), out.tokens[i].end());
  }
  return out;
}

Matrix MergeAveragePart(const Matrix &roles, const CandidateSet &candidates) {
  CheckRows(roles, candidates.size(), "average merging");
  Matrix part = Matrix::Zero(roles.rows(), roles.cols());
  for (int i = 0; i < candidates.size(); ++i) {
    const std::vector<int> &c = candidates.tokens[i];
    if (c.empty()) continue;
    for (int j : c) part.row(i) += roles.row(j);
    part.row(i) /= static_cast<double>(c.size());
  }
  return part;
}

Matrix MergeAttentionPart(const Matrix &roles, const CandidateSet &candidates) {
  CheckRows(roles, candidates.size(), "attention merging");
  Matrix part = Matrix::Zero(roles.rows(), roles.cols());
  for (int i = 0; i < candidates.size(); ++i) {
    std::vector<int> c = AttentionSet(candidates, i);
    if (c.empty()) continue;
    Matrix rc = Gather(roles, c);
    Vector a = Softmax(rc * roles.row(i).transpose());
    part.row(i) = a.transpose() * rc;
  }
  return part;
}

Matrix MergeSelfAttentionPart(const Matrix &roles,
                              const CandidateSet &candidates,
                              const SelfAttentionWeights &weights,
                              const MergingConfig &config) {
  CheckRows(roles, candidates.size(), "self-attention merging");
  const int heads = config.heads;
  const int dh = config.head_size;
  if (static_cast<int>(weights.query.size()) != heads ||
      static_cast<int>(weights.key.size()) != heads ||
      static_cast<int>(weights.value.size()) != heads) {
    throw Error(ErrorCode::kShapeMismatch, "self-attention head count");
  }
  for (int h = 0; h < heads; ++h) {
    for (const Matrix *w : {&weights.query[h], &weights.key[h], &weights.value[h]}) {
      if (w->rows() != dh || w->cols() != roles.cols()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "self-attention projection must be " + std::to_string(dh) +
                        "x" + std::to_string(roles.cols()));
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Matrix part = Matrix::Zero(roles.rows(), heads * dh);
  for (int i = 0; i < candidates.size(); ++i) {
    const std::vector<int> &c = candidates.tokens[i];
    if (c.empty()) continue;
    Matrix rc = Gather(roles, c);
    for (int h = 0; h < heads; ++h) {
      Vector q = weights.query[h] * roles.row(i).transpose();
      Matrix k = rc * weights.key[h].transpose();
      Matrix v = rc * weights.value[h].transpose();
      Vector a = Softmax(k * q * scale);
      part.row(i).segment(h * dh, dh) = a.transpose() * v;
    }
  }
  return part;
}

Matrix MergeAverage(const Matrix &roles, const CandidateSet &candidates,
                    const Matrix &hidden) {
  Matrix part = MergeAveragePart(roles, candidates);
  Matrix m(hidden.rows(), hidden.cols() + part.cols());
  m << hidden, part;
  return m;
}

Matrix MergeAttention(const Matrix &roles, const CandidateSet &candidates,
                      const Matrix &hidden) {
  Matrix part = MergeAttentionPart(roles, candidates);
  Matrix m(hidden.rows(), hidden.cols() + part.cols());
  m << hidden, part;
  return m;
}

Matrix MergeSelfAttention(const Matrix &roles, const CandidateSet &candidates,
                          const Matrix &hidden,
                          const SelfAttentionWeights &weights,
                          const MergingConfig &config) {
  Matrix part = MergeSelfAttentionPart(roles, candidates, weights, config);
  Matrix m(hidden.rows(), hidden.cols() + part.cols());
  m << hidden, part;
  return m;
}

void MergeAverageBackward(const CandidateSet &candidates, const Matrix &d_part,
                          Matrix *d_roles) {
  for (int i = 0; i < candidates.size(); ++i) {
    const std::vector<int> &c = candidates.tokens[i];
    if (c.empty()) continue;
    const double w = 1.0 / static_cast<double>(c.size());
    for (int j : c) d_roles->row(j) += w * d_part.row(i);
  }
}

void MergeAttentionBackward(const Matrix &roles, const CandidateSet &candidates,
                            const Matrix &d_part, Matrix *d_roles) {
  for (int i = 0; i < candidates.size(); ++i) {
    std::vector<int> c = AttentionSet(candidates, i);
    if (c.empty()) continue;
    Matrix rc = Gather(roles, c);
    Vector a = Softmax(rc * roles.row(i).transpose());
    Vector d_out = d_part.row(i).transpose();
    Vector da = rc * d_out;
    Vector ds = a.array() * (da.array() - a.dot(da));
    for (size_t k = 0; k < c.size(); ++k) {
      d_roles->row(c[k]) += a[k] * d_out.transpose() + ds[k] * roles.row(i);
    }
    d_roles->row(i) += ds.transpose() * rc;
  }
}

void MergeSelfAttentionBackward(const Matrix &roles,
                                const CandidateSet &candidates,
                                const SelfAttentionWeights &weights,
                                const MergingConfig &config,
                                const Matrix &d_part, Matrix *d_roles,
                                SelfAttentionWeights *d_weights) {
  const int dh = config.head_size;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  for (int i = 0; i < candidates.size(); ++i) {
    const std::vector<int> &c = candidates.tokens[i];
    if (c.empty()) continue;
    Matrix rc = Gather(roles, c);
    Matrix d_rc = Matrix::Zero(rc.rows(), rc.cols());
    RowVector ri = roles.row(i);
    for (int h = 0; h < config.heads; ++h) {
      const Matrix &wq = weights.query[h];
      const Matrix &wk = weights.key[h];
      const Matrix &wv = weights.value[h];
      Vector q = wq * ri.transpose();
      Matrix k = rc * wk.transpose();
      Matrix v = rc * wv.transpose();
      Vector a = Softmax(k * q * scale);
      Vector d_out = d_part.row(i).segment(h * dh, dh).transpose();

      Matrix dv = a * d_out.transpose();
      Vector da = v * d_out;
      Vector ds = a.array() * (da.array() - a.dot(da));
      Vector dq = k.transpose() * ds * scale;
      Matrix dk = ds * q.transpose() * scale;

      d_weights->value[h] += dv.transpose() * rc;
      d_weights->key[h] += dk.transpose() * rc;
      d_weights->query[h] += dq * ri;
      d_rc += dv * wv + dk * wk;
      d_roles->row(i) += (wq.transpose() * dq).transpose();
    }
    for (size_t k = 0; k < c.size(); ++k) d_roles->row(c[k]) += d_rc.row(k);
  }
}

double CrossEntropy(const Matrix &probs, std::span<const int> gold) {
  if (probs.rows() != static_cast<Eigen::Index>(gold.size())) {
    throw Error(ErrorCode::kLengthMismatch,
                "probabilities have " + std::to_string(probs.rows()) +
                    " rows for " + std::to_string(gold.size()) + " labels");
  }
  if (gold.empty()) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < gold.size(); ++i) {
    double p = probs(i, gold[i]);
    sum -= p == 0.0 ? std::log(std::numeric_limits<double>::min()) : std::log(p);
  }
  return sum / static_cast<double>(gold.size());
}

double MultiLayerLoss(const Matrix &trigger_probs, const Matrix &theme_probs,
                      const Matrix &cause_probs, const LabelFrame &gold) {
  auto ints = [](const std::vector<ArgLabel> &labels) {
    std::vector<int> out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) out[i] = static_cast<int>(labels[i]);
    return out;
  };
  return CrossEntropy(trigger_probs, gold.trigger) +
         CrossEntropy(theme_probs, ints(gold.theme)) +
         CrossEntropy(cause_probs, ints(gold.cause));
}

ParamCount CountParams(const ParamCountQuery &q) {
  ParamCount count;
  const long long d = q.hidden;
  count.trigger_layer = d * q.trigger_labels + q.trigger_labels;
  count.label_embedding = static_cast<long long>(q.trigger_labels) * d;
  const long long role_width = q.hidden_width_projections ? d : 2 * d;
  long long part = 0;
  switch (q.strategy) {
    case MergeStrategy::kNone:
      break;
    case MergeStrategy::kAverage:
    case MergeStrategy::kAttention:
      part = 2 * d;
      break;
    case MergeStrategy::kSelfAttention:
      part = static_cast<long long>(q.heads) * q.head_size;
      count.merging = static_cast<long long>(q.heads) * 3 * q.head_size * role_width;
      break;
  }
  const long long m = d + part;
  count.theme_layer = m * q.arg_labels + q.arg_labels;
  count.cause_layer = m * q.arg_labels + q.arg_labels;
  if (q.strategy == MergeStrategy::kNone) count.label_embedding = 0;
  return count;
}

}  // namespace mlsl::nn
