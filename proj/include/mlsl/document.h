#ifndef MLSL_DOCUMENT_H_
#define MLSL_DOCUMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "mlsl/event_type.h"

namespace mlsl {

// Character offsets are code point offsets into Document::text; `end` is
// exclusive.
struct Span {
  int start = 0;
  int end = 0;

  bool operator==(const Span &) const = default;
  auto operator<=>(const Span &) const = default;
};

struct EntityMention {
  std::string id;
  std::string etype;
  Span span;
  std::string surface;
};

struct TriggerMention {
  std::string id;
  EventType type = EventType::kGeneExpression;
  Span span;
  std::string surface;
};

// Reference from an event to one of its arguments: a given entity (T id) or
// another event (E id).
struct ArgRef {
  enum class Kind { kEntity, kEvent };
  Kind kind = Kind::kEntity;
  std::string id;

  bool operator==(const ArgRef &) const = default;
};

struct GoldEvent {
  std::string id;
  EventType type = EventType::kGeneExpression;
  TriggerMention trigger;
  std::vector<ArgRef> themes;
  std::optional<ArgRef> cause;
};

struct Document {
  std::string doc_id;
  std::string text;
  std::vector<EntityMention> entities;
  std::vector<GoldEvent> events;
  // Offset of `text` inside the source document; nonzero for sentence splits.
  int base_offset = 0;

  const EntityMention *FindEntity(const std::string &id) const;
  const GoldEvent *FindEvent(const std::string &id) const;
  // Length of `text` in code points.
  int length() const;
};

}  // namespace mlsl

#endif  // MLSL_DOCUMENT_H_
