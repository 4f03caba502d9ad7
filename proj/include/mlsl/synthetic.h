#ifndef MLSL_SYNTHETIC_H_
#define MLSL_SYNTHETIC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlsl/document.h"
#include "mlsl/event_type.h"

// Generated standoff corpora for the self-contained training runs.
namespace mlsl::synthetic {

// Appends space-separated words to a one-document annotation.
class DocumentBuilder {
 public:
  explicit DocumentBuilder(std::string doc_id);

  Span Word(std::string_view word);
  void Words(std::string_view space_separated);
  // Returns the entity id (T1, T2, ...).
  std::string Entity(std::string_view surface, std::string_view etype = "Protein");
  TriggerMention Trigger(std::string_view surface, EventType type);
  // Returns the event id (E1, E2, ...).
  std::string AddEvent(EventType type, const TriggerMention &trigger,
                       std::vector<ArgRef> themes,
                       std::optional<ArgRef> cause = std::nullopt);

  static ArgRef EntityRef(std::string id) {
    return ArgRef{ArgRef::Kind::kEntity, std::move(id)};
  }
  static ArgRef EventRef(std::string id) {
    return ArgRef{ArgRef::Kind::kEvent, std::move(id)};
  }

  Document Build() const;

 private:
  Document doc_;
  int next_trigger_ = 0;
};

// Single sentences built from eight templates covering nested regulation,
// Binding and every simple type, cycled in order.
std::vector<Document> MixedCorpus(int count, uint64_t seed);

// "BMP-6 induced phosphorylation of Smad1/5/8 ." with the two nested events.
Document NestedExampleDocument();

// Alternating entity/trigger sentences where the argument labels of an entity
// depend on the event types of its neighbouring triggers, which sit too far
// away for a token window to see.
//   Gene_expression: theme is the entity on its right
//   Phosphorylation: theme is the entity on its left
//   Positive_regulation: theme right, cause left
//   Negative_regulation: theme left, cause right
std::vector<Document> SeparabilityCorpus(int count, uint64_t seed,
                                         std::string_view id_prefix = "sep");

// `pairs` (trigger, argument) pairs, of which `far` have two trigger mentions
// between argument and trigger. Each far case costs three pairs.
std::vector<Document> DistanceCorpus(int pairs, int far);

// Writes .txt/.a1/.a2 for every document.
void WriteCorpus(const std::string &dir, const std::vector<Document> &docs);

}  // namespace mlsl::synthetic

#endif  // MLSL_SYNTHETIC_H_
