#ifndef MLSL_SCHEMA_CODEC_H_
#define MLSL_SCHEMA_CODEC_H_

#include <span>
#include <string>
#include <vector>

#include "mlsl/document.h"
#include "mlsl/labels.h"
#include "mlsl/vocab.h"

namespace mlsl {

enum class Role { kTheme, kCause };

std::string_view RoleName(Role role);

// Token sequence of one sentence. Every entity mention is collapsed into a
// single "@TYPE@" mask token; the remaining text is subword tokenized.
struct TokenizedSentence {
  std::string source_text;
  std::vector<std::string> tokens;
  std::vector<int> token_ids;
  // Code point spans into source_text. The head token has an empty span at 0.
  std::vector<Span> char_spans;
  std::vector<bool> is_entity_mask;
  // Entity id and type for mask tokens, empty otherwise.
  std::vector<std::string> entity_ids;
  std::vector<std::string> entity_types;
  bool special_head = false;

  int size() const { return static_cast<int>(tokens.size()); }
};

struct TokenizeOptions {
  bool special_head = true;
};

// Throws kOverlappingEntities when two entity spans overlap.
TokenizedSentence TokenizeAndMask(const Document &sentence,
                                  const SubwordVocab &vocab,
                                  const TokenizeOptions &options = {});

// Mask token for an entity type, e.g. "GENE" -> "@GENE@".
std::string EntityMaskToken(std::string_view etype);

// Adds every word piece needed to tokenize `sentence` as whole words plus the
// entity mask tokens.
void ExtendVocab(const Document &sentence, SubwordVocab *vocab);

// Per-token labels of the three layers. Trigger labels index a
// TriggerLabelSpace.
struct LabelFrame {
  std::vector<int> trigger;
  std::vector<ArgLabel> theme;
  std::vector<ArgLabel> cause;

  int size() const { return static_cast<int>(trigger.size()); }
  bool operator==(const LabelFrame &) const = default;
};

struct EncodeStats {
  int pairs = 0;            // distinct (trigger, role, argument) pairs
  int kept = 0;
  int distance_drops = 0;   // owner more than two trigger mentions away
  int collision_drops = 0;  // lost to a nearer owner in the same layer
  int unaligned_drops = 0;  // trigger/argument did not map onto tokens
  int trigger_collisions = 0;
};

struct EncodeResult {
  LabelFrame frame;
  EncodeStats stats;
};

// Gold events must belong to the sentence the tokens were produced from.
// Entity arguments are resolved through TokenizedSentence::entity_ids.
EncodeResult EncodeLabels(const TokenizedSentence &sentence,
                          std::span<const GoldEvent> events,
                          const TriggerLabelSpace &space);

// Half-open token range.
struct TokenRange {
  int begin = 0;
  int end = 0;

  bool operator==(const TokenRange &) const = default;
  auto operator<=>(const TokenRange &) const = default;
};

struct TriggerRun {
  TokenRange tokens;
  EventType type = EventType::kGeneExpression;
};

// Contiguous B/I trigger runs of a trigger-layer sequence. Entity labels and
// O end a run; an I-x without a same-type predecessor starts a new run and is
// counted in `repaired`.
std::vector<TriggerRun> ExtractTriggerRuns(std::span<const int> labels,
                                           const TriggerLabelSpace &space,
                                           int *repaired = nullptr);

struct DecodedTrigger {
  TriggerMention mention;
  TokenRange tokens;
};

struct ArgLink {
  enum class Kind { kEntity, kTrigger };

  int trigger = -1;  // index into DecodeResult::triggers
  Role role = Role::kTheme;
  Kind kind = Kind::kEntity;
  TokenRange tokens;
  Span span;
  std::string entity_id;  // kEntity
  int arg_trigger = -1;   // kTrigger: index into DecodeResult::triggers

  bool operator==(const ArgLink &) const = default;
};

struct DecodeStats {
  int repaired = 0;    // I-x labels without a head
  int unresolved = 0;  // no trigger at the labelled position
  int unattached = 0;  // run neither an entity mask nor a trigger mention
};

struct DecodeResult {
  std::vector<DecodedTrigger> triggers;
  std::vector<ArgLink> links;
  DecodeStats stats;
};

DecodeResult DecodeLabels(const TokenizedSentence &sentence,
                          const LabelFrame &frame,
                          const TriggerLabelSpace &space);

}  // namespace mlsl

#endif  // MLSL_SCHEMA_CODEC_H_
