#include "mlsl/evaluator.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "mlsl/error.h"

namespace mlsl {
namespace {

bool EntitySpanMatch(const EventArg &p, const EventArg &g) {
  return p.span == g.span;
}

// Unique (type, span) trigger items of a set.
struct TriggerItem {
  EventType type;
  Span span;
  auto operator<=>(const TriggerItem &) const = default;
};

struct ArgItem {
  EventType type;
  Span trigger;
  Role role;
  EventArg::Kind kind;
  Span arg_span;           // entity span or nested trigger span
  EventType nested_type;   // kEvent only

  bool operator<(const ArgItem &o) const {
    return std::tie(trigger, type, role, kind, arg_span, nested_type) <
           std::tie(o.trigger, o.type, o.role, o.kind, o.arg_span,
                    o.nested_type);
  }
};

struct EventItem {
  const EventQuadrupleSet *set;
  int index;
  const Event &event() const { return set->events[index]; }
};

std::vector<TriggerItem> TriggerItems(const EventQuadrupleSet &set) {
  std::set<TriggerItem> items;
  for (const Event &ev : set.events) items.insert({ev.type, ev.trigger.span});
  return {items.begin(), items.end()};
}

std::vector<ArgItem> ArgItems(const EventQuadrupleSet &set) {
  std::set<ArgItem> items;
  auto add = [&](const Event &ev, Role role, const EventArg &arg) {
    ArgItem item{ev.type, ev.trigger.span, role, arg.kind, arg.span,
                 EventType::kGeneExpression};
    if (arg.kind == EventArg::Kind::kEvent) {
      item.arg_span = set.events[arg.event].trigger.span;
      item.nested_type = set.events[arg.event].type;
    }
    items.insert(item);
  };
  for (const Event &ev : set.events) {
    for (const EventArg &th : ev.themes) add(ev, Role::kTheme, th);
    if (ev.cause) add(ev, Role::kCause, *ev.cause);
  }
  return {items.begin(), items.end()};
}

// Greedy one-to-one matching. Items are visited in order of `start`.
template <typename Item, typename TypeOf, typename StartOf, typename MatchFn>
void GreedyCount(const std::vector<Item> &preds, const std::vector<Item> &golds,
                 TypeOf type_of, StartOf start_of, MatchFn match,
                 TaskScores *scores) {
  auto order = [&](const std::vector<Item> &items) {
    std::vector<int> idx(items.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return start_of(items[a]) < start_of(items[b]);
    });
    return idx;
  };
  std::vector<int> pred_order = order(preds);
  std::vector<bool> used(preds.size(), false);
  for (int g : order(golds)) {
    bool hit = false;
    for (int p : pred_order) {
      if (used[p] || !match(preds[p], golds[g])) continue;
      used[p] = true;
      hit = true;
      break;
    }
    Counts &c = scores->per_type[type_of(golds[g])];
    if (hit) {
      ++c.tp;
    } else {
      ++c.fn;
    }
  }
  for (size_t p = 0; p < preds.size(); ++p) {
    if (!used[p]) ++scores->per_type[type_of(preds[p])].fp;
  }
}

void RecomputeMicro(TaskScores *scores) {
  scores->micro = Counts{};
  for (const auto &[type, counts] : scores->per_type) scores->micro += counts;
}

std::string Fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

const char *const kTaskNames[] = {"trigger", "argument", "event"};

const TaskScores &Task(const ScoreReport &r, int i) {
  return i == 0 ? r.trigger : i == 1 ? r.argument : r.event;
}

}  // namespace

std::string_view MatchModeName(MatchMode mode) {
  return mode == MatchMode::kStrict ? "strict" : "approximate_recursive";
}

std::optional<MatchMode> ParseMatchMode(std::string_view name) {
  if (name == "strict") return MatchMode::kStrict;
  if (name == "approximate_recursive" || name == "approx") {
    return MatchMode::kApproximateRecursive;
  }
  return std::nullopt;
}

SpanMatcher::SpanMatcher(std::string_view text) : words_(SplitWords(text)) {}

int SpanMatcher::StartWord(int offset) const {
  for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
    if (words_[w].end > offset) return w;
  }
  return static_cast<int>(words_.size());
}

int SpanMatcher::EndWord(int offset) const {
  for (int w = static_cast<int>(words_.size()) - 1; w >= 0; --w) {
    if (words_[w].start < offset) return w;
  }
  return -1;
}

bool SpanMatcher::Match(Span pred, Span gold) const {
  if (pred == gold) return true;
  return std::abs(StartWord(pred.start) - StartWord(gold.start)) <= 1 &&
         std::abs(EndWord(pred.end) - EndWord(gold.end)) <= 1;
}

bool SpanMatch(const TriggerMention &pred, const TriggerMention &gold,
               const SpanMatcher &matcher) {
  return pred.type == gold.type && matcher.Match(pred.span, gold.span);
}

bool EventMatch(const EventQuadrupleSet &preds, int pred,
                const EventQuadrupleSet &golds, int gold, MatchMode mode,
                const SpanMatcher &matcher) {
  const Event &p = preds.events[pred];
  const Event &g = golds.events[gold];
  if (p.type != g.type || !matcher.Match(p.trigger.span, g.trigger.span)) {
    return false;
  }
  auto arg_match = [&](const EventArg &pa, const EventArg &ga) {
    if (pa.kind != ga.kind) return false;
    if (pa.kind == EventArg::Kind::kEntity) return EntitySpanMatch(pa, ga);
    if (mode == MatchMode::kStrict) {
      return EventMatch(preds, pa.event, golds, ga.event, mode, matcher);
    }
    const Event &ps = preds.events[pa.event];
    const Event &gs = golds.events[ga.event];
    return ps.type == gs.type && matcher.Match(ps.trigger.span, gs.trigger.span);
  };
  if (p.cause.has_value() != g.cause.has_value()) return false;
  if (p.cause && !arg_match(*p.cause, *g.cause)) return false;
  if (p.themes.size() != g.themes.size()) return false;

  // Themes as a multiset: backtracking bipartite assignment.
  const size_t k = p.themes.size();
  std::vector<bool> taken(k, false);
  std::function<bool(size_t)> assign = [&](size_t i) {
    if (i == k) return true;
    for (size_t j = 0; j < k; ++j) {
      if (taken[j] || !arg_match(p.themes[i], g.themes[j])) continue;
      taken[j] = true;
      if (assign(i + 1)) return true;
      taken[j] = false;
    }
    return false;
  };
  return assign(0);
}

double Counts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
}

double Counts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
}

double Counts::f1() const {
  const int denom = 2 * tp + fp + fn;
  return tp == 0 ? 0.0 : 2.0 * tp / denom;
}

ScoreReport ScoreCorpus(std::span<const ScoredDocument> preds,
                        std::span<const ScoredDocument> golds, MatchMode mode) {
  std::map<std::string, const ScoredDocument *> pred_by_id;
  for (const ScoredDocument &d : preds) pred_by_id[d.doc_id] = &d;
  if (pred_by_id.size() != golds.size()) {
    throw Error(ErrorCode::kDocIdMismatch,
                "prediction and gold document sets differ in size (" +
                    std::to_string(pred_by_id.size()) + " vs " +
                    std::to_string(golds.size()) + ")");
  }
  ScoreReport report;
  report.mode = mode;
  for (const ScoredDocument &gold : golds) {
    auto it = pred_by_id.find(gold.doc_id);
    if (it == pred_by_id.end()) {
      throw Error(ErrorCode::kDocIdMismatch,
                  "no prediction for document " + gold.doc_id);
    }
    const ScoredDocument &pred = *it->second;
    SpanMatcher matcher(gold.text);

    GreedyCount(
        TriggerItems(pred.events), TriggerItems(gold.events),
        [](const TriggerItem &t) { return t.type; },
        [](const TriggerItem &t) { return t.span.start; },
        [&](const TriggerItem &p, const TriggerItem &g) {
          return p.type == g.type && matcher.Match(p.span, g.span);
        },
        &report.trigger);

    GreedyCount(
        ArgItems(pred.events), ArgItems(gold.events),
        [](const ArgItem &a) { return a.type; },
        [](const ArgItem &a) { return a.trigger.start; },
        [&](const ArgItem &p, const ArgItem &g) {
          if (p.type != g.type || p.role != g.role || p.kind != g.kind ||
              !matcher.Match(p.trigger, g.trigger)) {
            return false;
          }
          if (p.kind == EventArg::Kind::kEntity) return p.arg_span == g.arg_span;
          return p.nested_type == g.nested_type &&
                 matcher.Match(p.arg_span, g.arg_span);
        },
        &report.argument);

    auto event_items = [](const EventQuadrupleSet &set) {
      std::vector<EventItem> items;
      for (int i = 0; i < set.size(); ++i) items.push_back({&set, i});
      return items;
    };
    GreedyCount(
        event_items(pred.events), event_items(gold.events),
        [](const EventItem &e) { return e.event().type; },
        [](const EventItem &e) { return e.event().trigger.span.start; },
        [&](const EventItem &p, const EventItem &g) {
          return EventMatch(*p.set, p.index, *g.set, g.index, mode, matcher);
        },
        &report.event);
  }
  RecomputeMicro(&report.trigger);
  RecomputeMicro(&report.argument);
  RecomputeMicro(&report.event);
  return report;
}

MeanStd Summarize(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / values.size();
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(sq / (values.size() - 1));
  }
  return out;
}

RunSummary SummarizeRuns(std::span<const ScoreReport> reports) {
  RunSummary summary;
  summary.runs = static_cast<int>(reports.size());
  for (int t = 0; t < 3; ++t) {
    std::array<std::vector<double>, 3> prf;
    std::set<EventType> types;
    for (const ScoreReport &r : reports) {
      const Counts &c = Task(r, t).micro;
      prf[0].push_back(c.precision());
      prf[1].push_back(c.recall());
      prf[2].push_back(c.f1());
      for (const auto &[type, counts] : Task(r, t).per_type) types.insert(type);
    }
    for (int k = 0; k < 3; ++k) summary.micro[kTaskNames[t]][k] = Summarize(prf[k]);
    for (EventType type : types) {
      std::vector<double> f1s;
      for (const ScoreReport &r : reports) {
        auto it = Task(r, t).per_type.find(type);
        f1s.push_back(it == Task(r, t).per_type.end() ? 0.0 : it->second.f1());
      }
      summary.per_type_f1[kTaskNames[t]][type] = Summarize(f1s);
    }
  }
  return summary;
}

std::string FormatReport(const ScoreReport &report) {
  std::ostringstream out;
  out << "# mode: " << MatchModeName(report.mode)
      << " (local approximation of the shared-task scorer)\n";
  if (report.seed >= 0) out << "# seed: " << report.seed << "\n";
  if (!report.checkpoint.empty()) out << "# checkpoint: " << report.checkpoint << "\n";
  for (int t = 0; t < 3; ++t) {
    const TaskScores &task = Task(report, t);
    out << "\n[" << kTaskNames[t] << "]\n";
    out << std::left << std::setw(22) << "type" << std::right << std::setw(7)
        << "gold" << std::setw(7) << "pred" << std::setw(7) << "match"
        << std::setw(8) << "P" << std::setw(8) << "R" << std::setw(8) << "F1"
        << "\n";
    auto row = [&](std::string_view name, const Counts &c) {
      out << std::left << std::setw(22) << name << std::right << std::setw(7)
          << c.tp + c.fn << std::setw(7) << c.tp + c.fp << std::setw(7) << c.tp
          << std::setw(8) << Fixed(100 * c.precision()) << std::setw(8)
          << Fixed(100 * c.recall()) << std::setw(8) << Fixed(100 * c.f1())
          << "\n";
    };
    for (const auto &[type, counts] : task.per_type) row(EventTypeName(type), counts);
    row("ALL (micro)", task.micro);
  }
  return out.str();
}

std::string FormatRunSummary(const RunSummary &summary) {
  std::ostringstream out;
  out << "# runs: " << summary.runs << " (mean±std, percent)\n";
  for (const char *task : kTaskNames) {
    const auto &m = summary.micro.at(task);
    out << std::left << std::setw(10) << task << " P " << Fixed(100 * m[0].mean)
        << "±" << Fixed(100 * m[0].stddev) << "  R " << Fixed(100 * m[1].mean)
        << "±" << Fixed(100 * m[1].stddev) << "  F1 " << Fixed(100 * m[2].mean)
        << "±" << Fixed(100 * m[2].stddev) << "\n";
  }
  return out.str();
}

nlohmann::json ReportToJson(const ScoreReport &report) {
  nlohmann::json j;
  j["mode"] = MatchModeName(report.mode);
  j["seed"] = report.seed;
  j["checkpoint"] = report.checkpoint;
  j["note"] = "local approximation of the shared-task scorer";
  auto counts = [](const Counts &c) {
    return nlohmann::json{{"tp", c.tp},
                          {"fp", c.fp},
                          {"fn", c.fn},
                          {"precision", c.precision()},
                          {"recall", c.recall()},
                          {"f1", c.f1()}};
  };
  for (int t = 0; t < 3; ++t) {
    const TaskScores &task = Task(report, t);
    nlohmann::json tj;
    tj["micro"] = counts(task.micro);
    for (const auto &[type, c] : task.per_type) {
      tj["per_type"][std::string(EventTypeName(type))] = counts(c);
    }
    j[kTaskNames[t]] = tj;
  }
  return j;
}

nlohmann::json RunSummaryToJson(const RunSummary &summary) {
  nlohmann::json j;
  j["runs"] = summary.runs;
  auto ms = [](const MeanStd &m) {
    return nlohmann::json{{"mean", m.mean}, {"std", m.stddev}};
  };
  for (const auto &[task, prf] : summary.micro) {
    j[task]["precision"] = ms(prf[0]);
    j[task]["recall"] = ms(prf[1]);
    j[task]["f1"] = ms(prf[2]);
  }
  for (const auto &[task, types] : summary.per_type_f1) {
    for (const auto &[type, m] : types) {
      j[task]["per_type_f1"][std::string(EventTypeName(type))] = ms(m);
    }
  }
  return j;
}

}  // namespace mlsl
