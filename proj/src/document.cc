#include "mlsl/document.h"

#include "mlsl/utf8.h"

namespace mlsl {

const EntityMention *Document::FindEntity(const std::string &id) const {
  for (const EntityMention &e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const GoldEvent *Document::FindEvent(const std::string &id) const {
  for (const GoldEvent &e : events) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

int Document::length() const {
  return static_cast<int>(CharIndex(text).size());
}

}  // namespace mlsl
