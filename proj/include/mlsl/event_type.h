#ifndef MLSL_EVENT_TYPE_H_
#define MLSL_EVENT_TYPE_H_

#include <optional>
#include <span>
#include <string_view>

namespace mlsl {

// GE11 core types followed by the four GE13 additions.
enum class EventType {
  kGeneExpression,
  kTranscription,
  kProteinCatabolism,
  kPhosphorylation,
  kLocalization,
  kBinding,
  kRegulation,
  kPositiveRegulation,
  kNegativeRegulation,
  kProteinModification,
  kUbiquitination,
  kAcetylation,
  kDeacetylation,
};

inline constexpr int kNumEventTypes = 13;

enum class Corpus { kGe11, kGe13 };

// Event types of a corpus configuration in canonical order.
std::span<const EventType> CorpusEventTypes(Corpus corpus);

// Standoff name, e.g. "Positive_regulation".
std::string_view EventTypeName(EventType type);
// Short tag used in labels, e.g. "PoRe".
std::string_view EventTypeAbbrev(EventType type);

// Accepts either the standoff name or the short tag.
std::optional<EventType> ParseEventType(std::string_view name);

bool IsRegulation(EventType type);
inline bool IsBinding(EventType type) { return type == EventType::kBinding; }
inline bool IsSimple(EventType type) {
  return !IsRegulation(type) && !IsBinding(type);
}

}  // namespace mlsl

#endif  // MLSL_EVENT_TYPE_H_
