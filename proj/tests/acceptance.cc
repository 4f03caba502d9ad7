// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "mlsl/error.h"
#include "mlsl/evaluator.h"
#include "mlsl/events.h"
#include "mlsl/nn/model.h"
#include "mlsl/pipeline.h"
#include "mlsl/standoff.h"
#include "mlsl/synthetic.h"
#include "test_support.h"

namespace mlsl {
namespace {

namespace fs = std::filesystem;
using nn::Matrix;
using nn::MergeStrategy;
using nn::Rng;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void Check(bool cond, const std::string &what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void Run(int number, const std::string &name, const std::function<void(Outcome *)> &body) {
  Outcome out;
  try {
    body(&out);
  } catch (const std::exception &e) {
    out.ok = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  if (!out.ok) ++failures;
  std::printf("%s criterion %d: %s%s\n", out.ok ? "PASS" : "FAIL", number, name.c_str(),
              out.detail.str().c_str());
  std::fflush(stdout);
}

void CodecRoundTrip(Outcome *out) {
  auto start = Clock::now();
  Rng rng(2024);
  std::vector<Document> docs;
  while (docs.size() < 1000) {
    Document d = testing::RandomCodecSentence(&rng, "c" + std::to_string(docs.size()), 30, 4);
    docs.push_back(std::move(d));
  }
  TriggerLabelSpace space = testing::SpaceFor(docs);
  SubwordVocab vocab = testing::VocabFor(docs);
  int sentences = 0, links = 0, drops = 0, nested = 0, mismatches = 0, too_long = 0;
  for (const Document &d : docs) {
    TokenizedSentence s = TokenizeAndMask(d, vocab);
    if (s.size() > 40) {
      ++too_long;
      continue;
    }
    ++sentences;
    EncodeResult enc = EncodeLabels(s, d.events, space);
    testing::BruteForceEncoding oracle = testing::BruteForceEncode(s, d.events);
    std::set<testing::LinkKey> got = testing::LinkKeys(DecodeLabels(s, enc.frame, space));
    int counted = enc.stats.distance_drops + enc.stats.collision_drops;
    if (got != oracle.links || counted != oracle.distance_drops + oracle.collision_drops) {
      ++mismatches;
    }
    links += static_cast<int>(got.size());
    drops += counted;
    for (const GoldEvent &ev : d.events) {
      for (const ArgRef &th : ev.themes) nested += th.kind == ArgRef::Kind::kEvent;
    }
  }
  double secs = Seconds(start);
  out->detail << " (" << sentences << " sentences, " << links << " links, " << drops
              << " drops, " << nested << " nested themes, " << secs << " s)";
  out->Check(too_long == 0, "sentence over 40 tokens");
  out->Check(sentences >= 1000, ">=1000 sentences");
  out->Check(mismatches == 0, std::to_string(mismatches) + " sentences disagree with brute force");
  out->Check(nested > 0, "nested regulation present");
  out->Check(secs < 30.0, "runtime < 30 s");
}

nn::SelfAttentionWeights RandomWeights(Rng *rng, int heads, int head_size, int width) {
  nn::SelfAttentionWeights w;
  for (int h = 0; h < heads; ++h) {
    w.query.push_back(testing::RandomMatrix(rng, head_size, width, 0.7));
    w.key.push_back(testing::RandomMatrix(rng, head_size, width, 0.7));
    w.value.push_back(testing::RandomMatrix(rng, head_size, width, 0.7));
  }
  return w;
}

double MaxDiff(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

void MergingOracles(Outcome *out) {
  Rng rng(99);
  auto ev = CorpusEventTypes(Corpus::kGe11);
  TriggerLabelSpace space({ev.begin(), ev.end()}, {"Protein"});
  double worst[3] = {0, 0, 0};
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + rng.Below(7);
    const int width = 2 * (1 + rng.Below(8));
    const int heads = 1 + rng.Below(2);
    const int head_size = 1 + rng.Below(8);
    std::vector<int> labels;
    for (int t = 0; t < n; ++t) {
      double u = rng.Uniform();
      EventType type = static_cast<EventType>(rng.Below(9));
      labels.push_back(u < 0.4   ? TriggerLabelSpace::kOutside
                       : u < 0.55 ? space.EntityBegin("Protein")
                       : u < 0.85 ? space.Begin(type)
                                  : space.Inside(type));
    }
    nn::CandidateSet cands = nn::BuildCandidates(labels, space);
    auto scalar = testing::ScalarCandidates(labels, space);
    out->Check(cands.tokens == scalar, "candidate sets");
    Matrix roles = testing::RandomMatrix(&rng, n, width, 1.5);
    nn::SelfAttentionWeights w = RandomWeights(&rng, heads, head_size, width);
    nn::MergingConfig cfg{MergeStrategy::kSelfAttention, heads, head_size};
    worst[0] = std::max(worst[0], MaxDiff(nn::MergeAveragePart(roles, cands),
                                          testing::ScalarAverage(roles, scalar)));
    worst[1] = std::max(worst[1], MaxDiff(nn::MergeAttentionPart(roles, cands),
                                          testing::ScalarAttention(roles, scalar)));
    worst[2] = std::max(
        worst[2], MaxDiff(nn::MergeSelfAttentionPart(roles, cands, w, cfg),
                          testing::ScalarSelfAttention(roles, scalar, w, heads, head_size)));
  }
  out->detail << " (max diff average " << worst[0] << ", attention " << worst[1]
              << ", self_attention " << worst[2] << ")";
  out->Check(worst[0] <= 1e-6 && worst[1] <= 1e-6 && worst[2] <= 1e-6, "oracle diff <= 1e-6");

  // Degenerate cases, exact.
  const int n = 4, width = 6;
  Matrix roles = testing::RandomMatrix(&rng, n, width);
  nn::SelfAttentionWeights w = RandomWeights(&rng, 1, 3, width);
  nn::MergingConfig cfg{MergeStrategy::kSelfAttention, 1, 3};
  nn::CandidateSet single = testing::MakeCandidateSet({{2}, {2}, {3}, {0}});
  Matrix avg = nn::MergeAveragePart(roles, single);
  Matrix att = nn::MergeAttentionPart(roles, single);
  Matrix sa = nn::MergeSelfAttentionPart(roles, single, w, cfg);
  const int target[] = {2, 2, 3, 0};
  bool single_ok = true;
  for (int i = 0; i < n; ++i) {
    Matrix v = (w.value[0] * roles.row(target[i]).transpose()).transpose();
    single_ok = single_ok && avg.row(i) == roles.row(target[i]) &&
                att.row(i) == roles.row(target[i]) && MaxDiff(sa.row(i), v) <= 1e-12;
  }
  out->Check(single_ok, "single-candidate identity");

  nn::CandidateSet empty = testing::MakeCandidateSet({{}, {}, {}, {}});
  out->Check(nn::MergeAveragePart(roles, empty).isZero(0) &&
                 nn::MergeAttentionPart(roles, empty).isZero(0) &&
                 nn::MergeSelfAttentionPart(roles, empty, w, cfg).isZero(0),
             "no-candidate parts are zero");

  nn::SelfAttentionWeights zero = w;
  zero.value[0].setZero();
  nn::CandidateSet multi = testing::MakeCandidateSet({{1, 3}, {0, 3}, {0, 1, 3}, {0, 1}});
  out->Check(nn::MergeSelfAttentionPart(roles, multi, zero, cfg).isZero(0),
             "zero value weights give zero output");
  zero = w;
  zero.query[0].setZero();
  Matrix uniform = nn::MergeSelfAttentionPart(roles, multi, zero, cfg);
  Matrix mean_v = (w.value[0] * (roles.row(0) + roles.row(1)).transpose() / 2).transpose();
  out->Check(MaxDiff(uniform.row(3), mean_v) <= 1e-12, "zero query weights give the mean");
}

void GradientCheck(Outcome *out) {
  for (MergeStrategy s : {MergeStrategy::kNone, MergeStrategy::kAverage,
                          MergeStrategy::kAttention, MergeStrategy::kSelfAttention}) {
    double worst = 0.0;
    std::string where;
    for (const auto &e : testing::GradientCheck(s, 5)) {
      if (e.rel_error >= worst) {
        worst = e.rel_error;
        where = e.name;
      }
    }
    out->detail << " " << nn::MergeStrategyName(s) << "=" << worst;
    out->Check(worst <= 1e-4, std::string(nn::MergeStrategyName(s)) + " " + where);
  }
}

double ScalarMeanNll(const Matrix &probs, const std::vector<int> &gold) {
  double sum = 0.0;
  for (size_t i = 0; i < gold.size(); ++i) sum -= std::log(probs(i, gold[i]));
  return sum / static_cast<double>(gold.size());
}

std::vector<int> Ints(const std::vector<ArgLabel> &labels) {
  std::vector<int> out;
  for (ArgLabel l : labels) out.push_back(static_cast<int>(l));
  return out;
}

void LossDecomposition(Outcome *out) {
  Document doc = synthetic::NestedExampleDocument();
  SubwordVocab vocab = testing::VocabFor({doc});
  TriggerLabelSpace space = testing::SpaceFor({doc});
  TokenizedSentence tokens = TokenizeAndMask(doc, vocab);
  LabelFrame gold = EncodeLabels(tokens, doc.events, space).frame;
  nn::ModelConfig cfg;
  cfg.hidden = 16;
  cfg.merging.head_size = 8;
  nn::Model model(cfg, space, vocab.size());
  Rng rng(3);
  model.Init(&rng);

  nn::ForwardPass pass = model.Forward(tokens, &gold, nullptr);
  double parts = ScalarMeanNll(pass.trigger.probs, gold.trigger) +
                 ScalarMeanNll(pass.theme.probs, Ints(gold.theme)) +
                 ScalarMeanNll(pass.cause.probs, Ints(gold.cause));
  double total = model.Loss(pass, gold);
  out->detail << " (total " << total << ")";
  out->Check(total == parts, "total == L_tr + L_t + L_c");

  for (const char *name : {"trigger.weight", "trigger.bias", "theme.weight", "theme.bias",
                           "cause.weight", "cause.bias"}) {
    model.params()[model.params().Find(name)].value.setZero();
  }
  double uniform = model.EvalLoss(tokens, gold);
  double expect = std::log(static_cast<double>(space.size())) + 2 * std::log(9.0);
  out->detail << " (uniform " << uniform << " vs " << expect << ")";
  out->Check(std::abs(uniform - expect) <= 1e-9, "uniform loss");
}

void ParamCount(Outcome *out) {
  nn::ParamCountQuery q;
  q.hidden_width_projections = true;
  q.trigger_labels = 21;
  long long sa = nn::CountParams(q).merging;
  q.strategy = MergeStrategy::kAverage;
  long long avg = nn::CountParams(q).merging;
  out->detail << " (self_attention " << sa << ", average " << avg << ")";
  out->Check(sa == 1769472, "1769472");
  out->Check(avg == 0, "average 0");
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string &name)
      : path_(fs::temp_directory_path() / ("mlsl_accept_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  std::string sub(const std::string &s) const { return (path_ / s).string(); }

 private:
  fs::path path_;
};

void Overfit(Outcome *out) {
  auto start = Clock::now();
  ScratchDir dir("overfit");
  std::vector<Document> docs = synthetic::MixedCorpus(8, 1);
  fs::create_directories(dir.sub("train"));
  synthetic::WriteCorpus(dir.sub("train"), docs);
  RunConfig c;
  c.train_dir = dir.sub("train");
  c.model.hidden = 32;
  c.model.merging.strategy = MergeStrategy::kSelfAttention;
  c.model.merging.head_size = 32;
  c.batch_size = 1;
  c.epochs = 200;
  TrainData data = LoadTrainData(c);
  TrainResult r = TrainSeed(c, data, 1, "");
  std::vector<Document> train = ReadCorpusDir(dir.sub("train"), true);
  ScoreReport report =
      ScoreCorpus(PredictScoredDocuments(*r.model, data.vocab, train, false),
                  GoldScoredDocuments(train), MatchMode::kApproximateRecursive);
  double f1 = report.event.micro.f1();
  double secs = Seconds(start);
  out->detail << " (event F1 " << f1 << ", best epoch " << r.best_epoch << ", " << secs
              << " s)";
  out->Check(f1 >= 0.99, "event F1 >= 0.99");
  out->Check(secs < 120.0, "runtime < 2 min");
}

void AblationTrend(Outcome *out) {
  auto start = Clock::now();
  ScratchDir dir("ablate");
  fs::create_directories(dir.sub("train"));
  fs::create_directories(dir.sub("dev"));
  synthetic::WriteCorpus(dir.sub("train"), synthetic::SeparabilityCorpus(300, 11, "sep"));
  synthetic::WriteCorpus(dir.sub("dev"), synthetic::SeparabilityCorpus(100, 12, "dev"));
  RunConfig c;
  c.train_dir = dir.sub("train");
  c.dev_dir = dir.sub("dev");
  c.output_dir = dir.sub("out");
  c.model.hidden = 32;
  c.model.merging.head_size = 32;
  c.epochs = 20;
  c.batch_size = 8;
  c.seeds = {1, 2, 3};
  c.ablate_strategies = {MergeStrategy::kNone, MergeStrategy::kAttention,
                         MergeStrategy::kSelfAttention};
  std::vector<AblationRow> rows = CmdAblate(c);
  double none = rows[0].argument_f1.mean * 100;
  double att = rows[1].argument_f1.mean * 100;
  double sa = rows[2].argument_f1.mean * 100;
  out->detail << " (Arg F1 none " << none << ", attention " << att << ", self_attention "
              << sa << ", " << Seconds(start) << " s)";
  out->Check(sa >= att && att >= none, "self_attention >= attention >= none");
  out->Check(sa - none >= 2.0, "self_attention - none >= 2");
}

void ScorerFixtures(Outcome *out) {
  auto score = [](const testing::ScoredPair &c, MatchMode mode) {
    std::vector<ScoredDocument> p = {c.pred}, g = {c.gold};
    return ScoreCorpus(p, g, mode);
  };
  testing::ScoredPair partial = testing::PartialSubEventCase();
  int strict_tp = score(partial, MatchMode::kStrict).event.micro.tp;
  int approx_tp = score(partial, MatchMode::kApproximateRecursive).event.micro.tp;
  out->detail << " (partial sub-event: strict tp " << strict_tp << ", approx tp " << approx_tp;
  out->Check(strict_tp == 0 && approx_tp == 1, "strict/approximate disagreement");

  int span_fail = 0;
  for (const auto &c : testing::SpanBoundaryCases()) {
    span_fail += SpanMatcher(c.text).Match(c.pred, c.gold) != c.match;
  }
  out->Check(span_fail == 0, std::to_string(span_fail) + " span cases");

  testing::ScoredPair two = testing::TwoOfThreeCase();
  for (MatchMode mode : {MatchMode::kStrict, MatchMode::kApproximateRecursive}) {
    Counts e = score(two, mode).event.micro;
    out->Check(e.tp == 2 && e.fp == 2 && e.fn == 1 && e.f1() == 4.0 / 7.0,
               std::string(MatchModeName(mode)) + " 2-of-3 F1");
  }
  out->detail << ", 2-of-3 F1 " << score(two, MatchMode::kStrict).event.micro.f1() << ")";
}

std::string TextOf(const Document &d, const ArgRef &ref) {
  if (ref.kind == ArgRef::Kind::kEntity) {
    const EntityMention *e = d.FindEntity(ref.id);
    return e ? e->surface : "?";
  }
  const GoldEvent *ev = d.FindEvent(ref.id);
  return ev ? std::string(EventTypeName(ev->type)) : "?";
}

void StandoffRoundTrip(Outcome *out) {
  std::vector<Document> docs;
  for (const auto &f : testing::FixtureSuite()) docs.push_back(testing::ParseFixture(f));
  docs.push_back(synthetic::NestedExampleDocument());
  for (const Document &doc : docs) {
    EventQuadrupleSet assembled = testing::AssembleFromGoldFrames(
        doc, testing::VocabFor({doc}), testing::SpaceFor({doc}));
    Document again = ParseDocument(doc.doc_id, doc.text, SerializeEntities(doc),
                                   SerializeEvents(doc, assembled));
    out->Check(SortedSignatures(FromGoldEvents(again)) == SortedSignatures(FromGoldEvents(doc)),
               doc.doc_id);
  }
  const Document &nested = docs.back();
  EventQuadrupleSet assembled = testing::AssembleFromGoldFrames(
      nested, testing::VocabFor({nested}), testing::SpaceFor({nested}));
  Document again = ParseDocument(nested.doc_id, nested.text, SerializeEntities(nested),
                                 SerializeEvents(nested, assembled));
  bool found = false;
  for (const GoldEvent &ev : again.events) {
    if (ev.type != EventType::kPositiveRegulation) continue;
    found = ev.trigger.surface == "induced" && ev.themes.size() == 1 &&
            ev.themes[0].kind == ArgRef::Kind::kEvent &&
            TextOf(again, ev.themes[0]) == "Phosphorylation" && ev.cause &&
            TextOf(again, *ev.cause) == "BMP-6";
  }
  out->detail << " (" << docs.size() << " documents, nested example has "
              << again.events.size() << " events)";
  out->Check(found && again.events.size() == 2, "nested PoRe(induced, Theme:E1, Cause:BMP-6)");
}

}  // namespace
}  // namespace mlsl

int main() {
  using namespace mlsl;
  Run(1, "codec round trip", CodecRoundTrip);
  Run(2, "merging layers match scalar references", MergingOracles);
  Run(3, "gradient check", GradientCheck);
  Run(4, "loss decomposition and uniform loss", LossDecomposition);
  Run(5, "self-attention parameter count", ParamCount);
  Run(6, "overfit run", Overfit);
  Run(7, "ablation trend", AblationTrend);
  Run(8, "scorer fixtures", ScorerFixtures);
  Run(9, "standoff round trip and assembly", StandoffRoundTrip);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
