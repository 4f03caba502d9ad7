#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "mlsl/error.h"
#include "mlsl/nn/layers.h"
#include "test_support.h"

namespace mlsl::nn {
namespace {

using mlsl::testing::MakeCandidateSet;
using mlsl::testing::RandomMatrix;

TriggerLabelSpace Space() {
  auto ev = CorpusEventTypes(Corpus::kGe11);
  return TriggerLabelSpace({ev.begin(), ev.end()}, {"Protein"});
}

SelfAttentionWeights RandomWeights(Rng *rng, int heads, int head_size, int width) {
  SelfAttentionWeights w;
  for (int h = 0; h < heads; ++h) {
    w.query.push_back(RandomMatrix(rng, head_size, width, 0.7));
    w.key.push_back(RandomMatrix(rng, head_size, width, 0.7));
    w.value.push_back(RandomMatrix(rng, head_size, width, 0.7));
  }
  return w;
}

SelfAttentionWeights ZerosLike(const SelfAttentionWeights &w) {
  SelfAttentionWeights z = w;
  for (auto *v : {&z.query, &z.key, &z.value}) {
    for (Matrix &m : *v) m.setZero();
  }
  return z;
}

std::vector<int> RandomTriggerLabels(Rng *rng, int n, const TriggerLabelSpace &space) {
  std::vector<int> labels;
  for (int t = 0; t < n; ++t) {
    double u = rng->Uniform();
    EventType type = static_cast<EventType>(rng->Below(3));
    if (u < 0.45) {
      labels.push_back(TriggerLabelSpace::kOutside);
    } else if (u < 0.6) {
      labels.push_back(space.EntityBegin("Protein"));
    } else if (u < 0.85) {
      labels.push_back(space.Begin(type));
    } else {
      labels.push_back(space.Inside(type));
    }
  }
  return labels;
}

double MaxAbsDiff(const Matrix &a, const Matrix &b) {
  EXPECT_EQ(a.rows(), b.rows());
  EXPECT_EQ(a.cols(), b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

// Central differences of f over every entry of *x.
Matrix NumericGrad(Matrix *x, const std::function<double()> &f) {
  const double h = 1e-6;
  Matrix g(x->rows(), x->cols());
  for (int r = 0; r < x->rows(); ++r) {
    for (int c = 0; c < x->cols(); ++c) {
      double v = (*x)(r, c);
      (*x)(r, c) = v + h;
      double up = f();
      (*x)(r, c) = v - h;
      double down = f();
      (*x)(r, c) = v;
      g(r, c) = (up - down) / (2 * h);
    }
  }
  return g;
}

double RelError(const Matrix &a, const Matrix &b) {
  double scale = std::max(a.norm(), b.norm());
  return scale < 1e-12 ? 0.0 : (a - b).norm() / scale;
}

TEST(Softmax, RowsSumToOneAndAreStable) {
  Matrix logits(2, 3);
  logits << 1000, 1001, 1002, -5, 0, 5;
  Matrix p = SoftmaxRows(logits);
  EXPECT_NEAR(p.row(0).sum(), 1.0, 1e-12);
  EXPECT_NEAR(p(0, 2), 1.0 / (1 + std::exp(-1.0) + std::exp(-2.0)), 1e-12);
  EXPECT_EQ(ArgmaxRows(p), (std::vector<int>{2, 2}));
}

TEST(Loss, CrossEntropyMatchesScalarLoop) {
  Rng rng(1);
  Matrix p = SoftmaxRows(RandomMatrix(&rng, 5, 4, 3.0));
  std::vector<int> gold = {0, 3, 1, 1, 2};
  double expect = 0.0;
  for (int i = 0; i < 5; ++i) expect -= std::log(p(i, gold[i]));
  EXPECT_NEAR(CrossEntropy(p, gold), expect / 5, 1e-12);
  std::vector<int> short_gold = {0};
  try {
    CrossEntropy(p, short_gold);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Loss, ZeroIsClampedButNanSurvives) {
  Matrix p(2, 2);
  p << 1.0, 0.0, 0.5, 0.5;
  std::vector<int> gold = {1, 0};
  EXPECT_TRUE(std::isfinite(CrossEntropy(p, gold)));
  p(0, 1) = std::nan("");
  EXPECT_TRUE(std::isnan(CrossEntropy(p, gold)));
}

TEST(Loss, ThreeLayersAdd) {
  Rng rng(2);
  const int n = 6;
  TriggerLabelSpace space = Space();
  Matrix ptr = SoftmaxRows(RandomMatrix(&rng, n, space.size(), 2.0));
  Matrix pt = SoftmaxRows(RandomMatrix(&rng, n, kNumArgLabels, 2.0));
  Matrix pc = SoftmaxRows(RandomMatrix(&rng, n, kNumArgLabels, 2.0));
  LabelFrame gold;
  for (int i = 0; i < n; ++i) {
    gold.trigger.push_back(static_cast<int>(rng.Below(space.size())));
    gold.theme.push_back(static_cast<ArgLabel>(rng.Below(kNumArgLabels)));
    gold.cause.push_back(static_cast<ArgLabel>(rng.Below(kNumArgLabels)));
  }
  std::vector<int> t(n), c(n);
  for (int i = 0; i < n; ++i) {
    t[i] = static_cast<int>(gold.theme[i]);
    c[i] = static_cast<int>(gold.cause[i]);
  }
  EXPECT_NEAR(MultiLayerLoss(ptr, pt, pc, gold),
              CrossEntropy(ptr, gold.trigger) + CrossEntropy(pt, t) + CrossEntropy(pc, c),
              1e-12);

  Matrix u_tr = Matrix::Constant(n, space.size(), 1.0 / space.size());
  Matrix u_arg = Matrix::Constant(n, kNumArgLabels, 1.0 / kNumArgLabels);
  EXPECT_NEAR(MultiLayerLoss(u_tr, u_arg, u_arg, gold),
              std::log(space.size()) + 2 * std::log(9.0), 1e-9);
  gold.cause.pop_back();
  EXPECT_THROW(MultiLayerLoss(ptr, pt, pc, gold), Error);
}

TEST(Forward, ShapesAreChecked) {
  Rng rng(3);
  Matrix h = RandomMatrix(&rng, 4, 6);
  Matrix w = RandomMatrix(&rng, 6, 5);
  RowVector b = RowVector::Zero(5);
  LayerOutput out = TriggerForward(h, w, b);
  EXPECT_EQ(out.probs.rows(), 4);
  EXPECT_EQ(out.probs.cols(), 5);
  EXPECT_EQ(out.labels, ArgmaxRows(SoftmaxRows(h * w)));
  try {
    ArgForward(h, RandomMatrix(&rng, 7, 9), RowVector::Zero(9));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  EXPECT_THROW(TriggerForward(h, w, RowVector::Zero(4)), Error);
}

TEST(RoleRepresentation, ConcatenatesLabelEmbedding) {
  Rng rng(4);
  Matrix h = RandomMatrix(&rng, 3, 2);
  Matrix table = RandomMatrix(&rng, 5, 2);
  std::vector<int> labels = {4, 0, 2};
  Matrix r = RoleRepresentation(h, labels, table);
  ASSERT_EQ(r.cols(), 4);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(r.row(i).head(2), table.row(labels[i]));
    EXPECT_EQ(r.row(i).tail(2), h.row(i));
  }
  labels[1] = 5;
  try {
    RoleRepresentation(h, labels, table);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownLabel);
  }
}

TEST(Candidates, NearestTwoPerSide) {
  TriggerLabelSpace space = Space();
  const int O = TriggerLabelSpace::kOutside;
  const int G = space.Begin(EventType::kGeneExpression);
  const int Gi = space.Inside(EventType::kGeneExpression);
  const int P = space.EntityBegin("Protein");
  //            0  1  2   3  4  5  6  7
  std::vector<int> labels = {G, O, G, Gi, P, G, O, G};
  CandidateSet c = BuildCandidates(labels, space);
  EXPECT_EQ(c.tokens[4], (std::vector<int>{0, 2, 3, 5, 7}));
  EXPECT_EQ(c.tokens[6], (std::vector<int>{2, 3, 5, 7}));
  EXPECT_EQ(c.tokens[3], (std::vector<int>{0, 5, 7}));
  ASSERT_EQ(c.mentions[6].size(), 3u);
  EXPECT_EQ(c.mentions[6][0].tokens, (TokenRange{5, 6}));
  EXPECT_EQ(c.mentions[6][0].position, (ArgPosition{Direction::kLeft, 1}));
}

TEST(CandidatesProperty, MatchLiteralRule) {
  Rng rng(5);
  TriggerLabelSpace space = Space();
  for (int k = 0; k < 500; ++k) {
    std::vector<int> labels = RandomTriggerLabels(&rng, 1 + rng.Below(16), space);
    ASSERT_EQ(BuildCandidates(labels, space).tokens,
              mlsl::testing::ScalarCandidates(labels, space));
  }
}

TEST(MergeProperty, PartsMatchScalarOracles) {
  Rng rng(6);
  TriggerLabelSpace space = Space();
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + rng.Below(12);
    const int width = 2 * (1 + rng.Below(5));
    const int heads = 1 + rng.Below(3);
    const int head_size = 1 + rng.Below(5);
    std::vector<int> labels = RandomTriggerLabels(&rng, n, space);
    CandidateSet cands = BuildCandidates(labels, space);
    auto scalar = mlsl::testing::ScalarCandidates(labels, space);
    Matrix roles = RandomMatrix(&rng, n, width, 1.5);
    SelfAttentionWeights w = RandomWeights(&rng, heads, head_size, width);
    MergingConfig cfg{MergeStrategy::kSelfAttention, heads, head_size};

    EXPECT_LE(MaxAbsDiff(MergeAveragePart(roles, cands),
                         mlsl::testing::ScalarAverage(roles, scalar)), 1e-6);
    EXPECT_LE(MaxAbsDiff(MergeAttentionPart(roles, cands),
                         mlsl::testing::ScalarAttention(roles, scalar)), 1e-6);
    EXPECT_LE(MaxAbsDiff(MergeSelfAttentionPart(roles, cands, w, cfg),
                         mlsl::testing::ScalarSelfAttention(roles, scalar, w, heads,
                                                            head_size)), 1e-6);
  }
}

TEST(Merge, DegenerateIdentities) {
  Rng rng(7);
  const int n = 4, width = 6;
  Matrix roles = RandomMatrix(&rng, n, width);
  SelfAttentionWeights w = RandomWeights(&rng, 2, 3, width);
  MergingConfig cfg{MergeStrategy::kSelfAttention, 2, 3};

  // No candidates anywhere: zero parts.
  CandidateSet empty = MakeCandidateSet({{}, {}, {}, {}});
  EXPECT_EQ(MergeAveragePart(roles, empty).norm(), 0.0);
  EXPECT_EQ(MergeAttentionPart(roles, empty).norm(), 0.0);
  EXPECT_EQ(MergeSelfAttentionPart(roles, empty, w, cfg).norm(), 0.0);

  // A single candidate j: average and attention return r_j, self-attention V r_j.
  CandidateSet single = MakeCandidateSet({{2}, {2}, {3}, {0}});
  Matrix avg = MergeAveragePart(roles, single);
  Matrix att = MergeAttentionPart(roles, single);
  Matrix sa = MergeSelfAttentionPart(roles, single, w, cfg);
  const int target[] = {2, 2, 3, 0};
  for (int i = 0; i < n; ++i) {
    EXPECT_LE((avg.row(i) - roles.row(target[i])).norm(), 1e-12);
    EXPECT_LE((att.row(i) - roles.row(target[i])).norm(), 1e-12);
    for (int h = 0; h < 2; ++h) {
      Vector v = w.value[h] * roles.row(target[i]).transpose();
      EXPECT_LE((sa.row(i).segment(h * 3, 3).transpose() - v).norm(), 1e-12);
    }
  }
  // Attention never attends a token to itself.
  CandidateSet self_only = MakeCandidateSet({{0}, {1}, {2}, {3}});
  EXPECT_EQ(MergeAttentionPart(roles, self_only).norm(), 0.0);

  // Identical candidate rows: any convex combination returns that row.
  Matrix same = roles;
  same.row(1) = same.row(3) = same.row(0);
  CandidateSet multi = MakeCandidateSet({{1, 3}, {0, 3}, {0, 1, 3}, {0, 1}});
  Matrix avg2 = MergeAveragePart(same, multi);
  Matrix att2 = MergeAttentionPart(same, multi);
  EXPECT_LE((avg2.row(2) - same.row(0)).norm(), 1e-12);
  EXPECT_LE((att2.row(2) - same.row(0)).norm(), 1e-12);

  // Zero queries give uniform attention, i.e. the mean of V r_j.
  SelfAttentionWeights zq = w;
  for (Matrix &q : zq.query) q.setZero();
  Matrix sa2 = MergeSelfAttentionPart(roles, multi, zq, cfg);
  Vector mean_v = w.value[0] * (roles.row(0) + roles.row(1)).transpose() / 2;
  EXPECT_LE((sa2.row(3).head(3).transpose() - mean_v).norm(), 1e-12);

  // The concat variants put hidden first.
  Matrix hidden = RandomMatrix(&rng, n, 3);
  Matrix full = MergeSelfAttention(roles, multi, hidden, w, cfg);
  EXPECT_EQ(full.cols(), 3 + 6);
  EXPECT_EQ(full.leftCols(3), hidden);
  EXPECT_EQ(MergeAverage(roles, multi, hidden).cols(), 3 + width);
  EXPECT_EQ(MergeAttention(roles, multi, hidden).rightCols(width),
            MergeAttentionPart(roles, multi));

  EXPECT_THROW(MergeAveragePart(roles, MakeCandidateSet({{}})), Error);
  SelfAttentionWeights narrow = RandomWeights(&rng, 2, 3, width - 1);
  EXPECT_THROW(MergeSelfAttentionPart(roles, multi, narrow, cfg), Error);
}

TEST(MergeBackward, MatchesFiniteDifferences) {
  Rng rng(8);
  TriggerLabelSpace space = Space();
  for (int k = 0; k < 10; ++k) {
    const int n = 3 + rng.Below(6), width = 4, heads = 2, head_size = 3;
    std::vector<int> labels = RandomTriggerLabels(&rng, n, space);
    CandidateSet cands = BuildCandidates(labels, space);
    Matrix roles = RandomMatrix(&rng, n, width);
    SelfAttentionWeights w = RandomWeights(&rng, heads, head_size, width);
    MergingConfig cfg{MergeStrategy::kSelfAttention, heads, head_size};

    Matrix g_avg = RandomMatrix(&rng, n, width);
    Matrix d_roles = Matrix::Zero(n, width);
    MergeAverageBackward(cands, g_avg, &d_roles);
    Matrix num = NumericGrad(&roles, [&] {
      return MergeAveragePart(roles, cands).cwiseProduct(g_avg).sum();
    });
    EXPECT_LE(RelError(d_roles, num), 1e-6);

    d_roles.setZero();
    MergeAttentionBackward(roles, cands, g_avg, &d_roles);
    num = NumericGrad(&roles, [&] {
      return MergeAttentionPart(roles, cands).cwiseProduct(g_avg).sum();
    });
    EXPECT_LE(RelError(d_roles, num), 1e-6);

    Matrix g_sa = RandomMatrix(&rng, n, heads * head_size);
    auto f = [&] {
      return MergeSelfAttentionPart(roles, cands, w, cfg).cwiseProduct(g_sa).sum();
    };
    d_roles.setZero();
    SelfAttentionWeights dw = ZerosLike(w);
    MergeSelfAttentionBackward(roles, cands, w, cfg, g_sa, &d_roles, &dw);
    EXPECT_LE(RelError(d_roles, NumericGrad(&roles, f)), 1e-6);
    for (int h = 0; h < heads; ++h) {
      EXPECT_LE(RelError(dw.query[h], NumericGrad(&w.query[h], f)), 1e-6);
      EXPECT_LE(RelError(dw.key[h], NumericGrad(&w.key[h], f)), 1e-6);
      EXPECT_LE(RelError(dw.value[h], NumericGrad(&w.value[h], f)), 1e-6);
    }
  }
}

TEST(ParamCount, SelfAttentionProjections) {
  ParamCountQuery q;
  q.hidden_width_projections = true;
  q.trigger_labels = 21;
  EXPECT_EQ(CountParams(q).merging, 1769472);
  q.hidden = 8;
  q.head_size = 4;
  q.heads = 2;
  EXPECT_EQ(CountParams(q).merging, 192);
  q.hidden_width_projections = false;
  EXPECT_EQ(CountParams(q).merging, 384);
  q.strategy = MergeStrategy::kAverage;
  EXPECT_EQ(CountParams(q).merging, 0);
  q.strategy = MergeStrategy::kNone;
  ParamCount none = CountParams(q);
  EXPECT_EQ(none.label_embedding, 0);
  EXPECT_EQ(none.theme_layer, 8 * 9 + 9);
  EXPECT_EQ(none.total(), none.trigger_layer + 2 * (8 * 9 + 9));
}

TEST(ParamCount, MergedWidths) {
  MergingConfig cfg{MergeStrategy::kSelfAttention, 3, 5};
  EXPECT_EQ(MergedPartWidth(cfg, 16), 15);
  cfg.strategy = MergeStrategy::kAttention;
  EXPECT_EQ(MergedPartWidth(cfg, 16), 16);
  cfg.strategy = MergeStrategy::kNone;
  EXPECT_EQ(MergedPartWidth(cfg, 16), 0);
  for (MergeStrategy s : {MergeStrategy::kNone, MergeStrategy::kAverage,
                          MergeStrategy::kAttention, MergeStrategy::kSelfAttention}) {
    EXPECT_EQ(ParseMergeStrategy(MergeStrategyName(s)), s);
  }
  EXPECT_FALSE(ParseMergeStrategy("max"));
}

}  // namespace
}  // namespace mlsl::nn
