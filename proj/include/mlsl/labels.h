#ifndef MLSL_LABELS_H_
#define MLSL_LABELS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlsl/event_type.h"

namespace mlsl {

// Argument-layer labels. The position names the owning trigger relative to
// the argument: LeftN is the N-th trigger mention to the argument's left.
enum class ArgLabel : int {
  kO = 0,
  kBLeft1,
  kILeft1,
  kBLeft2,
  kILeft2,
  kBRight1,
  kIRight1,
  kBRight2,
  kIRight2,
};

inline constexpr int kNumArgLabels = 9;

enum class Direction { kLeft, kRight };

struct ArgPosition {
  Direction direction = Direction::kLeft;
  int rank = 1;  // 1 or 2

  bool operator==(const ArgPosition &) const = default;
};

ArgLabel MakeArgLabel(bool begin, ArgPosition position);
std::optional<ArgPosition> ArgLabelPosition(ArgLabel label);
bool ArgLabelIsBegin(ArgLabel label);
std::string_view ArgLabelName(ArgLabel label);
std::optional<ArgLabel> ParseArgLabel(std::string_view name);

// Closed trigger-layer label space: O, B/I for every event type of the corpus
// configuration, and B/I for every entity type.
class TriggerLabelSpace {
 public:
  static constexpr int kOutside = 0;

  struct Info {
    enum class Kind { kOutside, kTrigger, kEntity };
    Kind kind = Kind::kOutside;
    bool begin = false;
    EventType event_type = EventType::kGeneExpression;
    int entity_type = -1;
  };

  TriggerLabelSpace(std::vector<EventType> event_types,
                    std::vector<std::string> entity_types);

  int size() const { return static_cast<int>(names_.size()); }

  // Throw kUnknownLabel when the type is not part of the space.
  int Begin(EventType type) const;
  int Inside(EventType type) const;
  int EntityBegin(std::string_view etype) const;
  int EntityInside(std::string_view etype) const;

  const Info &info(int label) const { return infos_[label]; }
  bool IsTrigger(int label) const {
    return infos_[label].kind == Info::Kind::kTrigger;
  }
  bool IsEntity(int label) const {
    return infos_[label].kind == Info::Kind::kEntity;
  }
  const std::string &name(int label) const { return names_[label]; }
  // Returns -1 when absent.
  int Find(std::string_view name) const;

  const std::vector<EventType> &event_types() const { return event_types_; }
  const std::vector<std::string> &entity_types() const {
    return entity_types_;
  }

  bool operator==(const TriggerLabelSpace &other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<EventType> event_types_;
  std::vector<std::string> entity_types_;
  std::vector<std::string> names_;
  std::vector<Info> infos_;
};

}  // namespace mlsl

#endif  // MLSL_LABELS_H_
