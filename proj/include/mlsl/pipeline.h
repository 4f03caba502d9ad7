#ifndef MLSL_PIPELINE_H_
#define MLSL_PIPELINE_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "mlsl/evaluator.h"
#include "mlsl/nn/adam.h"
#include "mlsl/nn/model.h"
#include "mlsl/schema_codec.h"
#include "mlsl/standoff.h"
#include "mlsl/vocab.h"
#include "json.hpp"

namespace mlsl {

struct RunConfig {
  std::string train_dir;
  std::string dev_dir;
  std::string output_dir = "mlsl_out";
  // Fixed vocabulary file; built from the training corpus when empty.
  std::string vocab;
  Corpus corpus = Corpus::kGe11;
  std::string encoder = "toy";
  nn::ModelConfig model;
  nn::AdamConfig adam;
  int batch_size = 32;
  int epochs = 20;
  std::vector<uint64_t> seeds = {1};
  // "event" or "trigger" dev F1.
  std::string selection_metric = "event";
  MatchMode eval_mode = MatchMode::kApproximateRecursive;
  bool pre_split = false;
  // Probability of building the merging input from predicted instead of gold
  // trigger labels for a training sentence.
  double train_use_predicted_triggers = 0.0;
  std::vector<nn::MergeStrategy> ablate_strategies = {
      nn::MergeStrategy::kNone, nn::MergeStrategy::kAverage,
      nn::MergeStrategy::kAttention, nn::MergeStrategy::kSelfAttention};
};

// key: value file. Unknown keys and bad values throw kUsage.
RunConfig LoadRunConfig(const std::string &path);
RunConfig ParseRunConfig(const std::string &yaml_text);
// Throws kUsage for settings this build cannot run.
void CheckRunConfig(const RunConfig &config, bool need_train_dir);

struct PreparedSentence {
  Document sentence;
  TokenizedSentence tokens;
  LabelFrame frame;
};

struct PrepareStats {
  int documents = 0;
  int sentences = 0;
  int triggers = 0;
  int argument_labels = 0;  // B-* argument labels set over both layers
  EncodeStats encode;
  int cross_sentence_events = 0;
  ParseStats parse;

  // Share of (trigger, role, argument) pairs lost to the distance rule.
  double distance_drop_rate() const;
};

struct PreparedCorpus {
  std::vector<Document> documents;
  std::vector<PreparedSentence> sentences;
  PrepareStats stats;
};

// Entity types seen in the documents, sorted.
std::vector<std::string> CollectEntityTypes(const std::vector<Document> &docs);
SubwordVocab BuildVocab(const std::vector<Document> &docs);

PreparedCorpus PrepareCorpus(std::vector<Document> docs,
                             const SubwordVocab &vocab,
                             const TriggerLabelSpace &space, bool pre_split,
                             bool special_head);

nlohmann::json PrepareStatsToJson(const PrepareStats &stats);
nlohmann::json SentenceToJson(const PreparedSentence &s,
                              const TriggerLabelSpace &space);

// Writes <output_dir>/prepared/{train,dev}.jsonl, vocab.txt and
// drop_report.json.
PrepareStats CmdPrepare(const RunConfig &config);

struct PredictStats {
  DecodeStats decode;
  AssemblyStats assembly;
};

// Runs the model over every sentence of `doc` and returns document-level
// events.
EventQuadrupleSet PredictDocument(const nn::Model &model,
                                  const SubwordVocab &vocab, const Document &doc,
                                  bool pre_split, PredictStats *stats = nullptr);

std::vector<ScoredDocument> GoldScoredDocuments(const std::vector<Document> &docs);
std::vector<ScoredDocument> PredictScoredDocuments(
    const nn::Model &model, const SubwordVocab &vocab,
    const std::vector<Document> &docs, bool pre_split);

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double dev_score = 0.0;
};

struct TrainResult {
  uint64_t seed = 0;
  std::string checkpoint;
  int best_epoch = 0;  // 0: initialization
  double best_dev_score = 0.0;
  std::vector<EpochLog> log;
  std::shared_ptr<const nn::Model> model;  // best dev parameters
};

struct TrainData {
  SubwordVocab vocab;
  TriggerLabelSpace space;
  PreparedCorpus train;
  std::vector<Document> dev;
};

TrainData LoadTrainData(const RunConfig &config);

// Trains one seed and keeps its best dev checkpoint as <dir>/model.json next
// to train.log. Without a dev corpus the training documents are used for
// selection. Throws kDivergence on a non-finite loss.
TrainResult TrainSeed(const RunConfig &config, const TrainData &data,
                      uint64_t seed, const std::string &dir,
                      std::ostream *progress = nullptr);
// One TrainSeed run per seed under <output_dir>/seed-<seed>.
std::vector<TrainResult> CmdTrain(const RunConfig &config,
                                  std::ostream *progress = nullptr);

// Writes one .a2 per input document into `output_dir`.
int CmdPredict(const std::string &checkpoint, const std::string &input_dir,
               const std::string &output_dir, bool pre_split);

struct ScoreOutput {
  std::vector<ScoreReport> reports;
  RunSummary summary;
};

ScoreOutput CmdScore(const std::vector<std::string> &pred_dirs,
                     const std::string &gold_dir, MatchMode mode);

struct AblationRow {
  nn::MergeStrategy strategy = nn::MergeStrategy::kNone;
  std::vector<ScoreReport> reports;
  MeanStd trigger_f1;
  MeanStd argument_f1;
  MeanStd event_f1;
};

std::vector<AblationRow> CmdAblate(const RunConfig &config,
                                   std::ostream *progress = nullptr);
std::string FormatAblation(const std::vector<AblationRow> &rows);

}  // namespace mlsl

#endif  // MLSL_PIPELINE_H_
