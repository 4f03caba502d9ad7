#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "mlsl/error.h"
#include "mlsl/nn/adam.h"
#include "mlsl/nn/checkpoint.h"
#include "mlsl/nn/encoder.h"
#include "mlsl/nn/model.h"
#include "mlsl/synthetic.h"
#include "test_support.h"

namespace mlsl::nn {
namespace {

struct Sample {
  Document doc;
  SubwordVocab vocab;
  TriggerLabelSpace space;
  TokenizedSentence tokens;
  LabelFrame gold;
};

Sample NestedSetup() {
  Document doc = synthetic::NestedExampleDocument();
  SubwordVocab vocab = mlsl::testing::VocabFor({doc});
  TriggerLabelSpace space = mlsl::testing::SpaceFor({doc});
  TokenizedSentence tokens = TokenizeAndMask(doc, vocab);
  LabelFrame gold = EncodeLabels(tokens, doc.events, space).frame;
  return {doc, vocab, space, tokens, gold};
}

ModelConfig SmallConfig(MergeStrategy s) {
  ModelConfig c;
  c.hidden = 8;
  c.max_length = 32;
  c.merging.strategy = s;
  c.merging.heads = 2;
  c.merging.head_size = 4;
  return c;
}

const MergeStrategy kAll[] = {MergeStrategy::kNone, MergeStrategy::kAverage,
                              MergeStrategy::kAttention, MergeStrategy::kSelfAttention};

TEST(Encoder, ShapesAndLimits) {
  ParamStore store;
  ToyEncoder enc(&store, 20, 6, 5);
  Rng rng(1);
  enc.Init(&rng);
  std::vector<int> ids = {1, 4, 7};
  Matrix h = enc.Encode(ids);
  EXPECT_EQ(h.rows(), 3);
  EXPECT_EQ(h.cols(), 6);
  EXPECT_LE(h.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_EQ(enc.Encode(ids), h);
  std::vector<int> long_ids(6, 1);
  try {
    enc.Encode(long_ids);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kSequenceTooLong);
  }
  std::vector<int> bad = {25};
  EXPECT_THROW(enc.Encode(bad), Error);
}

TEST(Encoder, ContextWindowIsThree) {
  ParamStore store;
  ToyEncoder enc(&store, 20, 6, 16);
  Rng rng(2);
  enc.Init(&rng);
  std::vector<int> a = {1, 2, 3, 4, 5, 6}, b = a;
  b[5] = 9;
  Matrix ha = enc.Encode(a), hb = enc.Encode(b);
  EXPECT_EQ(ha.topRows(4), hb.topRows(4));
  EXPECT_NE(ha.row(4), hb.row(4));
}

TEST(Encoder, DropoutMasks) {
  Rng rng(3);
  Matrix m = DropoutMask(200, 50, 0.3, &rng);
  int zeros = 0;
  for (int i = 0; i < m.size(); ++i) {
    double v = m.data()[i];
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.7) < 1e-12);
    zeros += v == 0.0;
  }
  EXPECT_NEAR(zeros / 10000.0, 0.3, 0.02);
}

TEST(Model, ParameterNamesAndCounts) {
  Sample s = NestedSetup();
  for (MergeStrategy strategy : kAll) {
    Model m(SmallConfig(strategy), s.space, s.vocab.size());
    const ParamStore &p = m.params();
    EXPECT_GE(p.Find("trigger.weight"), 0);
    EXPECT_GE(p.Find("theme.weight"), 0);
    EXPECT_EQ(p.Find("label_embedding") >= 0, strategy != MergeStrategy::kNone);
    EXPECT_EQ(p.Find("merge.query.1") >= 0, strategy == MergeStrategy::kSelfAttention);

    ParamCountQuery q;
    q.strategy = strategy;
    q.hidden = 8;
    q.head_size = 4;
    q.heads = 2;
    q.trigger_labels = s.space.size();
    long long encoder = 0;
    for (const Param &param : p.all()) {
      if (param.name.rfind("encoder.", 0) == 0) encoder += param.value.size();
    }
    EXPECT_EQ(p.Count() - encoder, CountParams(q).total()) << MergeStrategyName(strategy);
  }
}

TEST(Model, GradientsMatchFiniteDifferences) {
  for (MergeStrategy strategy : kAll) {
    for (const auto &e : mlsl::testing::GradientCheck(strategy, 11)) {
      EXPECT_LE(e.rel_error, 1e-4) << MergeStrategyName(strategy) << " " << e.name;
    }
  }
}

TEST(Model, DropoutOnlyWithRng) {
  Sample s = NestedSetup();
  Model m(SmallConfig(MergeStrategy::kSelfAttention), s.space, s.vocab.size());
  Rng rng(4);
  m.Init(&rng);
  ForwardPass a = m.Forward(s.tokens, &s.gold, nullptr);
  ForwardPass b = m.Forward(s.tokens, &s.gold, nullptr);
  EXPECT_EQ(a.theme.probs, b.theme.probs);
  EXPECT_NEAR(m.Loss(a, s.gold), m.EvalLoss(s.tokens, s.gold), 1e-12);
  ForwardPass c = m.Forward(s.tokens, &s.gold, &rng);
  EXPECT_NE(a.hidden, c.hidden);
}

TEST(Model, TeacherForcingUsesGoldTriggers) {
  Sample s = NestedSetup();
  Model m(SmallConfig(MergeStrategy::kAverage), s.space, s.vocab.size());
  Rng rng(5);
  m.Init(&rng);
  EXPECT_EQ(m.Forward(s.tokens, &s.gold, nullptr).role_labels, s.gold.trigger);
}

TEST(Model, PredictionResolvesEntitiesAndHead) {
  Sample s = NestedSetup();
  Model m(SmallConfig(MergeStrategy::kSelfAttention), s.space, s.vocab.size());
  Rng rng(6);
  m.Init(&rng);
  // Push every token toward the entity label so resolution has work to do.
  int w = m.params().Find("trigger.bias");
  m.params()[w].value(0, s.space.EntityBegin("Protein")) = 50.0;
  LabelFrame f = m.Predict(s.tokens);
  ASSERT_EQ(f.size(), s.tokens.size());
  EXPECT_EQ(f.trigger[0], TriggerLabelSpace::kOutside);
  for (int t = 1; t < s.tokens.size(); ++t) {
    EXPECT_EQ(s.space.IsEntity(f.trigger[t]), static_cast<bool>(s.tokens.is_entity_mask[t]));
  }
}

TEST(Model, TrainingStepsReduceLoss) {
  Sample s = NestedSetup();
  ModelConfig cfg = SmallConfig(MergeStrategy::kSelfAttention);
  Model m(cfg, s.space, s.vocab.size());
  Rng rng(7);
  m.Init(&rng);
  AdamConfig ac;
  ac.learning_rate = 1e-2;
  Adam adam(m.params(), ac);
  double first = m.EvalLoss(s.tokens, s.gold);
  for (int step = 0; step < 150; ++step) {
    m.params().ZeroGrad();
    ForwardPass pass = m.Forward(s.tokens, &s.gold, nullptr);
    m.Backward(pass, s.gold);
    adam.Step(&m.params());
  }
  EXPECT_EQ(adam.steps(), 150);
  EXPECT_LT(m.EvalLoss(s.tokens, s.gold), 0.1 * first);
  EXPECT_EQ(m.Predict(s.tokens), s.gold);
}

TEST(Adam, MatchesScalarUpdate) {
  ParamStore store;
  int h = store.Add("w", 1, 2);
  store[h].value << 0.5, -1.0;
  AdamConfig cfg;
  Adam adam(store, cfg);
  const double grads[3][2] = {{0.1, -0.2}, {0.3, 0.0}, {-0.05, 0.4}};
  double x[2] = {0.5, -1.0}, mom[2] = {0, 0}, vel[2] = {0, 0};
  for (int t = 1; t <= 3; ++t) {
    store[h].grad << grads[t - 1][0], grads[t - 1][1];
    adam.Step(&store);
    for (int k = 0; k < 2; ++k) {
      double g = grads[t - 1][k];
      mom[k] = 0.9 * mom[k] + 0.1 * g;
      vel[k] = 0.99 * vel[k] + 0.01 * g * g;
      double mh = mom[k] / (1 - std::pow(0.9, t));
      double vh = vel[k] / (1 - std::pow(0.99, t));
      x[k] -= 1e-3 * mh / (std::sqrt(vh) + 1e-8);
      EXPECT_NEAR(store[h].value(0, k), x[k], 1e-15);
    }
  }
}

TEST(Checkpoint, RoundTripKeepsPredictions) {
  Sample s = NestedSetup();
  Model m(SmallConfig(MergeStrategy::kSelfAttention), s.space, s.vocab.size());
  Rng rng(8);
  m.Init(&rng);
  auto path = std::filesystem::temp_directory_path() / "mlsl_ckpt_test.json";
  SaveCheckpoint(path.string(), m, s.vocab);
  Checkpoint back = LoadCheckpoint(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(back.vocab.tokens(), s.vocab.tokens());
  EXPECT_TRUE(back.model.space() == s.space);
  EXPECT_EQ(back.model.config().merging.heads, 2);
  ASSERT_EQ(back.model.params().size(), m.params().size());
  for (int i = 0; i < m.params().size(); ++i) {
    EXPECT_EQ(back.model.params()[i].value, m.params()[i].value);
  }
  EXPECT_EQ(back.model.Predict(s.tokens), m.Predict(s.tokens));
}

TEST(Checkpoint, RejectsInconsistentFiles) {
  Sample s = NestedSetup();
  Model m(SmallConfig(MergeStrategy::kAttention), s.space, s.vocab.size());
  Rng rng(9);
  m.Init(&rng);
  nlohmann::json j = CheckpointToJson(m, s.vocab);
  auto expect_shape = [](const nlohmann::json &bad) {
    try {
      CheckpointFromJson(bad);
      ADD_FAILURE();
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    }
  };
  nlohmann::json bad = j;
  bad["config"]["hidden"] = 9;
  expect_shape(bad);
  bad = j;
  bad["vocab"].push_back("extra");
  expect_shape(bad);
  bad = j;
  bad["params"].erase("theme.bias");
  expect_shape(bad);
  bad = j;
  bad.erase("config");
  expect_shape(bad);

  ParamStore other;
  other.Add("x", 2, 2);
  EXPECT_THROW(CopyParams(other, &m.params()), Error);
}

}  // namespace
}  // namespace mlsl::nn
