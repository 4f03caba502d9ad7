#include "mlsl/labels.h"

#include <array>
#include <cctype>

#include "mlsl/error.h"

namespace mlsl {
namespace {

constexpr std::array<std::string_view, kNumArgLabels> kArgLabelNames = {
    "O",       "B-Left1",  "I-Left1",  "B-Left2", "I-Left2",
    "B-Right1", "I-Right1", "B-Right2", "I-Right2",
};

// "GENE" -> "Gene", matching the label names used for entity masks.
std::string EntityLabelStem(std::string_view etype) {
  std::string out(etype);
  for (size_t i = 0; i < out.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(out[i]);
    out[i] = static_cast<char>(i == 0 ? std::toupper(c) : std::tolower(c));
  }
  return out;
}

}  // namespace

ArgLabel MakeArgLabel(bool begin, ArgPosition position) {
  int base = position.direction == Direction::kLeft ? 1 : 5;
  base += (position.rank - 1) * 2;
  return static_cast<ArgLabel>(base + (begin ? 0 : 1));
}

std::optional<ArgPosition> ArgLabelPosition(ArgLabel label) {
  int v = static_cast<int>(label);
  if (v == 0) return std::nullopt;
  ArgPosition pos;
  pos.direction = v <= 4 ? Direction::kLeft : Direction::kRight;
  pos.rank = ((v - 1) % 4) / 2 + 1;
  return pos;
}

bool ArgLabelIsBegin(ArgLabel label) {
  int v = static_cast<int>(label);
  return v != 0 && (v - 1) % 2 == 0;
}

std::string_view ArgLabelName(ArgLabel label) {
  return kArgLabelNames[static_cast<int>(label)];
}

std::optional<ArgLabel> ParseArgLabel(std::string_view name) {
  for (int i = 0; i < kNumArgLabels; ++i) {
    if (kArgLabelNames[i] == name) return static_cast<ArgLabel>(i);
  }
  return std::nullopt;
}

TriggerLabelSpace::TriggerLabelSpace(std::vector<EventType> event_types,
                                     std::vector<std::string> entity_types)
    : event_types_(std::move(event_types)),
      entity_types_(std::move(entity_types)) {
  names_.push_back("O");
  infos_.push_back(Info{});
  for (EventType type : event_types_) {
    for (bool begin : {true, false}) {
      names_.push_back(std::string(begin ? "B-" : "I-") +
                       std::string(EventTypeAbbrev(type)));
      Info info;
      info.kind = Info::Kind::kTrigger;
      info.begin = begin;
      info.event_type = type;
      infos_.push_back(info);
    }
  }
  for (size_t e = 0; e < entity_types_.size(); ++e) {
    for (bool begin : {true, false}) {
      names_.push_back(std::string(begin ? "B-" : "I-") +
                       EntityLabelStem(entity_types_[e]));
      Info info;
      info.kind = Info::Kind::kEntity;
      info.begin = begin;
      info.entity_type = static_cast<int>(e);
      infos_.push_back(info);
    }
  }
}

int TriggerLabelSpace::Begin(EventType type) const {
  for (size_t i = 0; i < event_types_.size(); ++i) {
    if (event_types_[i] == type) return 1 + static_cast<int>(i) * 2;
  }
  throw Error(ErrorCode::kUnknownLabel,
              "event type " + std::string(EventTypeName(type)) +
                  " is not in the trigger label space");
}

int TriggerLabelSpace::Inside(EventType type) const { return Begin(type) + 1; }

int TriggerLabelSpace::EntityBegin(std::string_view etype) const {
  for (size_t i = 0; i < entity_types_.size(); ++i) {
    if (entity_types_[i] == etype) {
      return 1 + static_cast<int>(event_types_.size() + i) * 2;
    }
  }
  throw Error(ErrorCode::kUnknownLabel, "entity type " + std::string(etype) +
                                            " is not in the trigger label space");
}

int TriggerLabelSpace::EntityInside(std::string_view etype) const {
  return EntityBegin(etype) + 1;
}

int TriggerLabelSpace::Find(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace mlsl
