#ifndef MLSL_EVENTS_H_
#define MLSL_EVENTS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsl/document.h"
#include "mlsl/schema_codec.h"

namespace mlsl {

// Argument of an assembled event: a given entity or an earlier event of the
// same set.
struct EventArg {
  enum class Kind { kEntity, kEvent };
  Kind kind = Kind::kEntity;
  std::string entity_id;  // kEntity
  Span span;              // kEntity
  int event = -1;         // kEvent: index into EventQuadrupleSet::events

  static EventArg Entity(std::string id, Span span) {
    return EventArg{Kind::kEntity, std::move(id), span, -1};
  }
  static EventArg Event(int index) { return EventArg{Kind::kEvent, {}, {}, index}; }

  bool operator==(const EventArg &) const = default;
};

struct Event {
  EventType type = EventType::kGeneExpression;
  TriggerMention trigger;
  std::vector<EventArg> themes;
  std::optional<EventArg> cause;
};

struct EventQuadrupleSet {
  std::vector<Event> events;

  bool empty() const { return events.empty(); }
  int size() const { return static_cast<int>(events.size()); }
};

struct AssemblyStats {
  int theme_links = 0;
  int theme_links_used = 0;      // produced at least one event
  int theme_links_dropped = 0;   // produced none
  int triggers_without_theme = 0;
  int cause_drops = 0;           // cause on a type that takes none, or unusable
  int cycle_drops = 0;
};

struct AssemblyResult {
  EventQuadrupleSet events;
  AssemblyStats stats;
};

// Builds events from decoded triggers and links. Simple types yield one event
// per entity theme, Binding one event over all entity themes, and regulation
// types one event per (theme, cause) combination, where a theme or cause that
// is a trigger mention stands for every event anchored at that trigger.
// Nested events precede the events that reference them.
AssemblyResult Assemble(std::span<const DecodedTrigger> triggers,
                        std::span<const ArgLink> links);

// Empty iff every EventQuadrupleSet invariant holds.
std::vector<std::string> Validate(const EventQuadrupleSet &set);

// Gold events of a document as an event set (topologically ordered).
// Throws kDanglingRef on unresolved or cyclic references.
EventQuadrupleSet FromGoldEvents(const Document &doc);

// Adds `offset` to every character span.
void ShiftEvents(int offset, EventQuadrupleSet *set);

// Id-free canonical description of one event including its nested arguments;
// two sets are equal up to id renaming iff their sorted signature lists match.
std::string EventSignature(const EventQuadrupleSet &set, int index);
std::vector<std::string> SortedSignatures(const EventQuadrupleSet &set);

}  // namespace mlsl

#endif  // MLSL_EVENTS_H_
