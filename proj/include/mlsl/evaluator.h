#ifndef MLSL_EVALUATOR_H_
#define MLSL_EVALUATOR_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsl/events.h"
#include "mlsl/utf8.h"
#include "json.hpp"

namespace mlsl {

enum class MatchMode { kStrict, kApproximateRecursive };

std::string_view MatchModeName(MatchMode mode);
std::optional<MatchMode> ParseMatchMode(std::string_view name);

// Approximate span matching over whitespace/punctuation words of the source
// text: boundaries may differ by at most one word on each side.
class SpanMatcher {
 public:
  explicit SpanMatcher(std::string_view text);

  bool Match(Span pred, Span gold) const;

 private:
  int StartWord(int offset) const;
  int EndWord(int offset) const;

  std::vector<WordToken> words_;
};

bool SpanMatch(const TriggerMention &pred, const TriggerMention &gold,
               const SpanMatcher &matcher);

// Event equality under `mode`. Strict compares nested events recursively;
// approximate recursive accepts a nested event whose type and trigger match
// even if its own arguments do not.
bool EventMatch(const EventQuadrupleSet &preds, int pred,
                const EventQuadrupleSet &golds, int gold, MatchMode mode,
                const SpanMatcher &matcher);

struct ScoredDocument {
  std::string doc_id;
  std::string text;
  EventQuadrupleSet events;
};

struct Counts {
  int tp = 0;
  int fp = 0;
  int fn = 0;

  // 0/0 is reported as 0.
  double precision() const;
  double recall() const;
  double f1() const;

  Counts &operator+=(const Counts &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct TaskScores {
  std::map<EventType, Counts> per_type;
  Counts micro;
};

struct ScoreReport {
  MatchMode mode = MatchMode::kApproximateRecursive;
  TaskScores trigger;
  TaskScores argument;
  TaskScores event;
  long long seed = -1;
  std::string checkpoint;
};

// Greedy one-to-one matching per document (golds by span start, first
// compatible prediction wins), pooled micro-style. Both lists must cover the
// same document ids; throws kDocIdMismatch otherwise.
ScoreReport ScoreCorpus(std::span<const ScoredDocument> preds,
                        std::span<const ScoredDocument> golds, MatchMode mode);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

MeanStd Summarize(std::span<const double> values);

struct RunSummary {
  int runs = 0;
  // task name -> (P, R, F1) of the micro row
  std::map<std::string, std::array<MeanStd, 3>> micro;
  // task name -> event type -> F1
  std::map<std::string, std::map<EventType, MeanStd>> per_type_f1;
};

RunSummary SummarizeRuns(std::span<const ScoreReport> reports);

std::string FormatReport(const ScoreReport &report);
std::string FormatRunSummary(const RunSummary &summary);
nlohmann::json ReportToJson(const ScoreReport &report);
nlohmann::json RunSummaryToJson(const RunSummary &summary);

}  // namespace mlsl

#endif  // MLSL_EVALUATOR_H_
