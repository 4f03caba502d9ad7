#include "mlsl/event_type.h"

#include <array>

namespace mlsl {
namespace {

struct TypeInfo {
  EventType type;
  std::string_view name;
  std::string_view abbrev;
};

constexpr std::array<TypeInfo, kNumEventTypes> kTypes = {{
    {EventType::kGeneExpression, "Gene_expression", "GeEx"},
    {EventType::kTranscription, "Transcription", "Tran"},
    {EventType::kProteinCatabolism, "Protein_catabolism", "PrCa"},
    {EventType::kPhosphorylation, "Phosphorylation", "Phos"},
    {EventType::kLocalization, "Localization", "Loca"},
    {EventType::kBinding, "Binding", "Bind"},
    {EventType::kRegulation, "Regulation", "Regu"},
    {EventType::kPositiveRegulation, "Positive_regulation", "PoRe"},
    {EventType::kNegativeRegulation, "Negative_regulation", "NeRe"},
    {EventType::kProteinModification, "Protein_modification", "PrMo"},
    {EventType::kUbiquitination, "Ubiquitination", "Ubiq"},
    {EventType::kAcetylation, "Acetylation", "Acet"},
    {EventType::kDeacetylation, "Deacetylation", "Deac"},
}};

constexpr std::array<EventType, kNumEventTypes> kAllTypes = {
    EventType::kGeneExpression,      EventType::kTranscription,
    EventType::kProteinCatabolism,   EventType::kPhosphorylation,
    EventType::kLocalization,        EventType::kBinding,
    EventType::kRegulation,          EventType::kPositiveRegulation,
    EventType::kNegativeRegulation,  EventType::kProteinModification,
    EventType::kUbiquitination,      EventType::kAcetylation,
    EventType::kDeacetylation,
};

}  // namespace

std::span<const EventType> CorpusEventTypes(Corpus corpus) {
  if (corpus == Corpus::kGe11) return std::span(kAllTypes).first(9);
  return kAllTypes;
}

std::string_view EventTypeName(EventType type) {
  return kTypes[static_cast<int>(type)].name;
}

std::string_view EventTypeAbbrev(EventType type) {
  return kTypes[static_cast<int>(type)].abbrev;
}

std::optional<EventType> ParseEventType(std::string_view name) {
  for (const TypeInfo &info : kTypes) {
    if (info.name == name || info.abbrev == name) return info.type;
  }
  return std::nullopt;
}

bool IsRegulation(EventType type) {
  return type == EventType::kRegulation ||
         type == EventType::kPositiveRegulation ||
         type == EventType::kNegativeRegulation;
}

}  // namespace mlsl
