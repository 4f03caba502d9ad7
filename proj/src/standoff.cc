#include "mlsl/standoff.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mlsl/error.h"
#include "mlsl/utf8.h"

namespace mlsl {
namespace {

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> SplitSpaces(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<int> ParseInt(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

class LineParser {
 public:
  LineParser(const std::string &doc_id, const std::string &text,
             ParseStats *stats)
      : doc_id_(doc_id), text_(text), index_(text), stats_(stats) {}

  [[noreturn]] void Fail(ErrorCode code, const std::string &what) const {
    throw Error(code, doc_id_ + "." + file_ + ":" + std::to_string(line_) +
                          ": " + what);
  }

  void Begin(const char *file) {
    file_ = file;
    line_ = 0;
  }

  // Iterates the non-empty lines of `contents`.
  void ForEachLine(std::string_view contents,
                   const std::function<void(std::string_view)> &fn) {
    for (std::string_view line : Split(contents, '\n')) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      fn(line);
    }
  }

  struct Mention {
    std::string id;
    std::string type;
    Span span;
    std::string surface;
  };

  Mention ParseTextBound(std::string_view line) {
    std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() != 3) Fail(ErrorCode::kMalformedLine, "expected 3 fields");
    std::vector<std::string_view> head = SplitSpaces(fields[1]);
    if (head.size() != 3) {
      Fail(ErrorCode::kMalformedLine, "expected '<type> <start> <end>'");
    }
    std::optional<int> start = ParseInt(head[1]);
    std::optional<int> end = ParseInt(head[2]);
    if (!start || !end) Fail(ErrorCode::kMalformedLine, "bad offsets");
    if (*start < 0 || *start >= *end ||
        *end > static_cast<int>(index_.size())) {
      Fail(ErrorCode::kSpanMismatch, "span outside text");
    }
    Mention m{std::string(fields[0]), std::string(head[0]), {*start, *end},
              std::string(fields[2])};
    if (index_.Slice(text_, *start, *end) != m.surface) {
      Fail(ErrorCode::kSpanMismatch, "surface '" + m.surface +
                                         "' does not match text '" +
                                         index_.Slice(text_, *start, *end) +
                                         "'");
    }
    return m;
  }

  void Ignore() {
    if (stats_) ++stats_->ignored_lines;
  }
  void IgnoreArg() {
    if (stats_) ++stats_->ignored_args;
  }
  void IgnoreMention() {
    if (stats_) ++stats_->ignored_mentions;
  }

 private:
  const std::string &doc_id_;
  const std::string &text_;
  CharIndex index_;
  ParseStats *stats_;
  const char *file_ = "";
  int line_ = 0;
};

// Numeric part of ids like "T12"; -1 otherwise.
int IdNumber(const std::string &id) {
  if (id.size() < 2) return -1;
  std::optional<int> n = ParseInt(std::string_view(id).substr(1));
  return n ? *n : -1;
}

}  // namespace

Document ParseDocument(std::string doc_id, std::string text,
                       std::string_view a1, std::optional<std::string_view> a2,
                       ParseStats *stats) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.text = std::move(text);
  LineParser parser(doc.doc_id, doc.text, stats);
  std::set<std::string> ids;

  parser.Begin("a1");
  parser.ForEachLine(a1, [&](std::string_view line) {
    if (line[0] != 'T') {
      parser.Ignore();
      return;
    }
    LineParser::Mention m = parser.ParseTextBound(line);
    if (!ids.insert(m.id).second) {
      parser.Fail(ErrorCode::kMalformedLine, "duplicate id " + m.id);
    }
    doc.entities.push_back({m.id, m.type, m.span, m.surface});
  });
  if (!a2) return doc;

  // Pass 1 collects text-bound mentions so E lines may reference later ones.
  std::unordered_map<std::string, TriggerMention> triggers;
  parser.Begin("a2");
  parser.ForEachLine(*a2, [&](std::string_view line) {
    if (line[0] != 'T') return;
    LineParser::Mention m = parser.ParseTextBound(line);
    if (!ids.insert(m.id).second) {
      parser.Fail(ErrorCode::kMalformedLine, "duplicate id " + m.id);
    }
    std::optional<EventType> type = ParseEventType(m.type);
    if (!type) {
      parser.IgnoreMention();
      return;
    }
    triggers[m.id] = TriggerMention{m.id, *type, m.span, m.surface};
  });

  std::set<std::string> event_ids;
  parser.Begin("a2");
  parser.ForEachLine(*a2, [&](std::string_view line) {
    if (line[0] != 'E') {
      if (line[0] != 'T') parser.Ignore();
      return;
    }
    std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() < 2) parser.Fail(ErrorCode::kMalformedLine, "expected 2 fields");
    std::vector<std::string_view> args = SplitSpaces(fields[1]);
    if (args.empty()) parser.Fail(ErrorCode::kMalformedLine, "empty event");
    GoldEvent ev;
    ev.id = std::string(fields[0]);
    if (!ids.insert(ev.id).second) {
      parser.Fail(ErrorCode::kMalformedLine, "duplicate id " + ev.id);
    }
    event_ids.insert(ev.id);

    auto role_ref = [&](std::string_view arg) {
      size_t colon = arg.find(':');
      if (colon == std::string_view::npos || colon == 0 ||
          colon + 1 == arg.size()) {
        parser.Fail(ErrorCode::kMalformedLine,
                    "bad argument '" + std::string(arg) + "'");
      }
      return std::make_pair(arg.substr(0, colon),
                            std::string(arg.substr(colon + 1)));
    };

    auto [type_name, trigger_id] = role_ref(args[0]);
    std::optional<EventType> type = ParseEventType(type_name);
    if (!type) {
      parser.Fail(ErrorCode::kUnknownType,
                  "unknown event type " + std::string(type_name));
    }
    auto trig = triggers.find(trigger_id);
    if (trig == triggers.end()) {
      parser.Fail(ErrorCode::kDanglingRef, "unknown trigger " + trigger_id);
    }
    if (trig->second.type != *type) {
      parser.Fail(ErrorCode::kMalformedLine,
                  "event type disagrees with trigger " + trigger_id);
    }
    ev.type = *type;
    ev.trigger = trig->second;

    std::map<int, ArgRef> themes;
    for (size_t i = 1; i < args.size(); ++i) {
      auto [role, ref_id] = role_ref(args[i]);
      const bool core = role == "Cause" || role.substr(0, 5) == "Theme";
      if (!core) {
        parser.IgnoreArg();
        continue;
      }
      ArgRef ref;
      ref.id = ref_id;
      if (ref_id[0] == 'E') {
        ref.kind = ArgRef::Kind::kEvent;
      } else if (doc.FindEntity(ref_id)) {
        ref.kind = ArgRef::Kind::kEntity;
      } else {
        parser.Fail(ErrorCode::kDanglingRef,
                    std::string(role) + " references unknown id " + ref_id);
      }
      if (role == "Cause") {
        if (ev.cause) parser.Fail(ErrorCode::kMalformedLine, "two causes");
        ev.cause = ref;
        continue;
      }
      int slot = 1;
      if (role.size() > 5) {
        std::optional<int> k = ParseInt(role.substr(5));
        if (!k || *k < 1) {
          parser.Fail(ErrorCode::kMalformedLine,
                      "bad role " + std::string(role));
        }
        slot = *k;
      }
      if (!themes.emplace(slot, ref).second) {
        parser.Fail(ErrorCode::kMalformedLine,
                    "repeated role " + std::string(role));
      }
    }
    for (auto &[slot, ref] : themes) ev.themes.push_back(std::move(ref));
    if (ev.themes.empty()) parser.Fail(ErrorCode::kMalformedLine, "event without theme");
    if (ev.cause && !IsRegulation(ev.type)) {
      parser.Fail(ErrorCode::kMalformedLine, "cause on non-regulation event");
    }
    doc.events.push_back(std::move(ev));
  });

  for (const GoldEvent &ev : doc.events) {
    auto check = [&](const ArgRef &ref) {
      if (ref.kind == ArgRef::Kind::kEvent && !event_ids.count(ref.id)) {
        throw Error(ErrorCode::kDanglingRef, doc.doc_id + ".a2: " + ev.id +
                                                 " references unknown event " +
                                                 ref.id);
      }
    };
    for (const ArgRef &th : ev.themes) check(th);
    if (ev.cause) check(*ev.cause);
  }
  return doc;
}

std::string SerializeEvents(const Document &doc, const EventQuadrupleSet &set) {
  if (set.empty()) return "";
  CharIndex index(doc.text);
  int next_t = 0;
  for (const EntityMention &e : doc.entities) {
    next_t = std::max(next_t, IdNumber(e.id));
  }
  ++next_t;

  std::ostringstream tlines, elines;
  std::map<std::pair<Span, EventType>, std::string> trigger_ids;
  for (const Event &ev : set.events) {
    auto key = std::make_pair(ev.trigger.span, ev.type);
    if (trigger_ids.count(key)) continue;
    const Span s = ev.trigger.span;
    if (s.start < 0 || s.start >= s.end ||
        s.end > static_cast<int>(index.size())) {
      throw Error(ErrorCode::kSpanMismatch,
                  doc.doc_id + ": trigger span outside text");
    }
    std::string id = "T" + std::to_string(next_t++);
    trigger_ids[key] = id;
    tlines << id << '\t' << EventTypeName(ev.type) << ' ' << s.start << ' '
           << s.end << '\t' << index.Slice(doc.text, s.start, s.end) << '\n';
  }

  auto ref = [&](const EventArg &arg) -> std::string {
    if (arg.kind == EventArg::Kind::kEntity) {
      if (!doc.FindEntity(arg.entity_id)) {
        throw Error(ErrorCode::kDanglingRef,
                    doc.doc_id + ": unknown entity " + arg.entity_id);
      }
      return arg.entity_id;
    }
    if (arg.event < 0 || arg.event >= set.size()) {
      throw Error(ErrorCode::kDanglingRef,
                  doc.doc_id + ": unknown event index " +
                      std::to_string(arg.event));
    }
    return "E" + std::to_string(arg.event + 1);
  };

  for (int i = 0; i < set.size(); ++i) {
    const Event &ev = set.events[i];
    elines << 'E' << i + 1 << '\t' << EventTypeName(ev.type) << ':'
           << trigger_ids.at({ev.trigger.span, ev.type});
    for (size_t k = 0; k < ev.themes.size(); ++k) {
      elines << " Theme";
      if (k > 0) elines << k + 1;
      elines << ':' << ref(ev.themes[k]);
    }
    if (ev.cause) elines << " Cause:" << ref(*ev.cause);
    elines << '\n';
  }
  return tlines.str() + elines.str();
}

std::string SerializeEntities(const Document &doc) {
  std::ostringstream out;
  for (const EntityMention &e : doc.entities) {
    out << e.id << '\t' << e.etype << ' ' << e.span.start << ' ' << e.span.end
        << '\t' << e.surface << '\n';
  }
  return out.str();
}

void WriteDocument(const std::string &dir, const Document &doc, bool with_a2) {
  const std::string base = dir + "/" + doc.doc_id;
  WriteFile(base + ".txt", doc.text);
  WriteFile(base + ".a1", SerializeEntities(doc));
  if (with_a2) WriteFile(base + ".a2", SerializeEvents(doc, FromGoldEvents(doc)));
}

SplitResult SplitSentences(const Document &doc, bool pre_split) {
  CharIndex index(doc.text);
  const int n = static_cast<int>(index.size());

  std::vector<Span> protected_spans;
  for (const EntityMention &e : doc.entities) protected_spans.push_back(e.span);
  for (const GoldEvent &ev : doc.events) protected_spans.push_back(ev.trigger.span);
  auto inside_span = [&](int cut) {
    for (const Span &s : protected_spans) {
      if (s.start < cut && cut < s.end) return true;
    }
    return false;
  };

  // Raw [start, end) ranges before trimming.
  std::vector<Span> ranges;
  int start = 0;
  for (int i = 0; i < n; ++i) {
    char32_t c = index.at(i);
    bool cut = false;
    int cut_at = i + 1;
    if (pre_split) {
      cut = c == '\n';
      cut_at = i;
    } else if ((c == '.' || c == '?' || c == '!') && i + 1 < n &&
               IsSpaceChar(index.at(i + 1))) {
      int j = i + 1;
      while (j < n && IsSpaceChar(index.at(j))) ++j;
      if (j < n) {
        char32_t next = index.at(j);
        cut = (next >= 'A' && next <= 'Z') || (next >= '0' && next <= '9');
      }
    }
    if (cut && !inside_span(cut_at)) {
      ranges.push_back({start, cut_at});
      start = pre_split ? i + 1 : cut_at;
    }
  }
  ranges.push_back({start, n});

  std::vector<Span> sentences;
  for (Span r : ranges) {
    while (r.start < r.end && IsSpaceChar(index.at(r.start))) ++r.start;
    while (r.end > r.start && IsSpaceChar(index.at(r.end - 1))) --r.end;
    if (r.end > r.start) sentences.push_back(r);
  }

  SplitResult result;
  if (sentences.size() <= 1 && !pre_split) {
    result.sentences.push_back(doc);
    return result;
  }

  auto sentence_of = [&](Span s) {
    for (int k = 0; k < static_cast<int>(sentences.size()); ++k) {
      if (s.start >= sentences[k].start && s.end <= sentences[k].end) return k;
    }
    return -1;
  };

  // Sentence of every gold event, -1 when it cannot be kept.
  std::unordered_map<std::string, int> event_sentence;
  std::function<int(const GoldEvent &, int)> place = [&](const GoldEvent &ev,
                                                         int depth) -> int {
    auto it = event_sentence.find(ev.id);
    if (it != event_sentence.end()) return it->second;
    if (depth > static_cast<int>(doc.events.size())) return -1;
    int k = sentence_of(ev.trigger.span);
    auto arg_ok = [&](const ArgRef &ref) {
      if (ref.kind == ArgRef::Kind::kEntity) {
        const EntityMention *e = doc.FindEntity(ref.id);
        return e && sentence_of(e->span) == k;
      }
      const GoldEvent *sub = doc.FindEvent(ref.id);
      return sub && place(*sub, depth + 1) == k;
    };
    if (k >= 0) {
      for (const ArgRef &th : ev.themes) {
        if (!arg_ok(th)) k = -1;
      }
      if (ev.cause && !arg_ok(*ev.cause)) k = -1;
    }
    event_sentence[ev.id] = k;
    return k;
  };

  for (int k = 0; k < static_cast<int>(sentences.size()); ++k) {
    const Span r = sentences[k];
    Document s;
    s.doc_id = doc.doc_id + "#" + std::to_string(k);
    s.text = index.Slice(doc.text, r.start, r.end);
    s.base_offset = doc.base_offset + r.start;
    for (const EntityMention &e : doc.entities) {
      if (sentence_of(e.span) != k) continue;
      EntityMention shifted = e;
      shifted.span = {e.span.start - r.start, e.span.end - r.start};
      s.entities.push_back(std::move(shifted));
    }
    result.sentences.push_back(std::move(s));
  }
  for (const GoldEvent &ev : doc.events) {
    int k = place(ev, 0);
    if (k < 0) {
      ++result.dropped_events;
      continue;
    }
    GoldEvent shifted = ev;
    shifted.trigger.span = {ev.trigger.span.start - sentences[k].start,
                            ev.trigger.span.end - sentences[k].start};
    result.sentences[k].events.push_back(std::move(shifted));
  }
  return result;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << contents;
}

std::vector<Document> ReadCorpusDir(const std::string &dir, bool require_a2,
                                    ParseStats *stats) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir);
  }
  std::vector<fs::path> texts;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".txt") texts.push_back(entry.path());
  }
  std::sort(texts.begin(), texts.end());
  std::vector<Document> docs;
  for (const fs::path &txt : texts) {
    fs::path a1 = txt, a2 = txt;
    a1.replace_extension(".a1");
    a2.replace_extension(".a2");
    std::string a1_text = fs::exists(a1) ? ReadFile(a1.string()) : "";
    std::optional<std::string> a2_text;
    if (fs::exists(a2)) {
      a2_text = ReadFile(a2.string());
    } else if (require_a2) {
      throw Error(ErrorCode::kIo, "missing " + a2.string());
    }
    docs.push_back(ParseDocument(
        txt.stem().string(), ReadFile(txt.string()), a1_text,
        a2_text ? std::optional<std::string_view>(*a2_text) : std::nullopt,
        stats));
  }
  return docs;
}

}  // namespace mlsl
