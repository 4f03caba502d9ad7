#ifndef MLSL_STANDOFF_H_
#define MLSL_STANDOFF_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlsl/document.h"
#include "mlsl/events.h"

namespace mlsl {

// Lines and arguments outside the theme/cause event model are skipped and
// counted here (Equiv, modifications, Site/ToLoc/AtLoc arguments, ...).
struct ParseStats {
  int ignored_lines = 0;
  int ignored_args = 0;
  int ignored_mentions = 0;  // a2 T lines that are not event triggers

  ParseStats &operator+=(const ParseStats &o) {
    ignored_lines += o.ignored_lines;
    ignored_args += o.ignored_args;
    ignored_mentions += o.ignored_mentions;
    return *this;
  }
};

// Parses one .txt/.a1/.a2 triple. Error messages carry "<doc>.a1:<line>"
// context.
Document ParseDocument(std::string doc_id, std::string text,
                       std::string_view a1,
                       std::optional<std::string_view> a2 = std::nullopt,
                       ParseStats *stats = nullptr);

// .a2 text for `events`. Trigger ids continue after the largest numeric
// entity id of the document; events are numbered E1.. in set order.
std::string SerializeEvents(const Document &doc, const EventQuadrupleSet &events);

// .a1 text: one T line per entity in document order.
std::string SerializeEntities(const Document &doc);

// Writes <dir>/<doc_id>.txt and .a1, plus .a2 from the gold events when
// `with_a2` is set.
void WriteDocument(const std::string &dir, const Document &doc, bool with_a2);

struct SplitResult {
  std::vector<Document> sentences;
  int dropped_events = 0;
};

// Splits at ".", "?" or "!" followed by whitespace and an uppercase letter or
// digit, never inside an annotated span. With `pre_split`, every non-empty
// line is a sentence. Sentence documents carry base_offset and sentence-local
// spans; events that do not fit in one sentence are dropped and counted.
SplitResult SplitSentences(const Document &doc, bool pre_split = false);

// Reads every <name>.txt in `dir` with its .a1 and (if present) .a2, sorted by
// name. Missing .a2 files are an error when `require_a2` is set.
std::vector<Document> ReadCorpusDir(const std::string &dir, bool require_a2,
                                    ParseStats *stats = nullptr);

std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view contents);

}  // namespace mlsl

#endif  // MLSL_STANDOFF_H_
