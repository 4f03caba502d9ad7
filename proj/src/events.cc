#include "mlsl/events.h"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "mlsl/error.h"

namespace mlsl {
namespace {

bool SameEvent(const Event &a, const Event &b) {
  return a.type == b.type && a.trigger.span == b.trigger.span &&
         a.themes == b.themes && a.cause == b.cause;
}

std::string SpanText(Span s) {
  return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + "]";
}

}  // namespace

AssemblyResult Assemble(std::span<const DecodedTrigger> triggers,
                        std::span<const ArgLink> links) {
  const int n = static_cast<int>(triggers.size());
  AssemblyResult result;
  AssemblyStats &stats = result.stats;
  std::vector<Event> &out = result.events.events;

  std::vector<std::vector<const ArgLink *>> themes(n), causes(n);
  for (const ArgLink &link : links) {
    if (link.trigger < 0 || link.trigger >= n) continue;
    (link.role == Role::kTheme ? themes : causes)[link.trigger].push_back(&link);
    if (link.role == Role::kTheme) ++stats.theme_links;
  }

  enum class State { kUnvisited, kActive, kDone };
  std::vector<State> state(n, State::kUnvisited);
  std::vector<std::vector<int>> anchored(n);

  auto emit = [&](int trigger, Event ev) {
    for (int e : anchored[trigger]) {
      if (SameEvent(out[e], ev)) return;
    }
    anchored[trigger].push_back(static_cast<int>(out.size()));
    out.push_back(std::move(ev));
  };

  std::function<void(int)> visit = [&](int t) {
    state[t] = State::kActive;
    // Arguments a link stands for; empty when the link cannot be used.
    auto resolve = [&](const ArgLink &link) {
      std::vector<EventArg> args;
      if (link.kind == ArgLink::Kind::kEntity) {
        args.push_back(EventArg::Entity(link.entity_id, link.span));
        return args;
      }
      int target = link.arg_trigger;
      if (target < 0 || target >= n) return args;
      if (state[target] == State::kActive) {
        ++stats.cycle_drops;
        return args;
      }
      if (state[target] == State::kUnvisited) visit(target);
      for (int e : anchored[target]) args.push_back(EventArg::Event(e));
      return args;
    };

    const TriggerMention &mention = triggers[t].mention;
    const EventType type = mention.type;
    if (themes[t].empty()) ++stats.triggers_without_theme;

    if (IsRegulation(type)) {
      std::vector<std::optional<EventArg>> cause_args;
      for (const ArgLink *c : causes[t]) {
        std::vector<EventArg> resolved = resolve(*c);
        if (resolved.empty()) ++stats.cause_drops;
        for (EventArg &a : resolved) cause_args.emplace_back(std::move(a));
      }
      if (cause_args.empty()) cause_args.emplace_back(std::nullopt);
      for (const ArgLink *th : themes[t]) {
        std::vector<EventArg> resolved = resolve(*th);
        if (resolved.empty()) {
          ++stats.theme_links_dropped;
          continue;
        }
        ++stats.theme_links_used;
        for (const EventArg &theme : resolved) {
          for (const std::optional<EventArg> &cause : cause_args) {
            emit(t, Event{type, mention, {theme}, cause});
          }
        }
      }
    } else {
      stats.cause_drops += static_cast<int>(causes[t].size());
      std::vector<EventArg> entity_themes;
      for (const ArgLink *th : themes[t]) {
        if (th->kind != ArgLink::Kind::kEntity) {
          ++stats.theme_links_dropped;
          continue;
        }
        ++stats.theme_links_used;
        entity_themes.push_back(EventArg::Entity(th->entity_id, th->span));
      }
      if (IsBinding(type)) {
        if (!entity_themes.empty()) {
          emit(t, Event{type, mention, entity_themes, std::nullopt});
        }
      } else {
        for (EventArg &theme : entity_themes) {
          emit(t, Event{type, mention, {std::move(theme)}, std::nullopt});
        }
      }
    }
    state[t] = State::kDone;
  };

  for (int t = 0; t < n; ++t) {
    if (state[t] == State::kUnvisited) visit(t);
  }
  return result;
}

std::vector<std::string> Validate(const EventQuadrupleSet &set) {
  std::vector<std::string> violations;
  const int n = set.size();
  auto check_arg = [&](int i, const EventArg &arg, const char *role) {
    if (arg.kind == EventArg::Kind::kEvent &&
        (arg.event < 0 || arg.event >= n || arg.event == i)) {
      violations.push_back("event " + std::to_string(i) + ": " + role +
                           " references invalid event " +
                           std::to_string(arg.event));
    }
  };
  for (int i = 0; i < n; ++i) {
    const Event &ev = set.events[i];
    const std::string where = "event " + std::to_string(i) + " (" +
                              std::string(EventTypeAbbrev(ev.type)) + ")";
    if (ev.themes.empty()) violations.push_back(where + ": no theme");
    for (const EventArg &th : ev.themes) check_arg(i, th, "theme");
    if (ev.cause) check_arg(i, *ev.cause, "cause");
    if (IsRegulation(ev.type)) {
      if (ev.themes.size() > 1) {
        violations.push_back(where + ": regulation with several themes");
      }
    } else {
      if (ev.cause) violations.push_back(where + ": cause on non-regulation");
      for (const EventArg &th : ev.themes) {
        if (th.kind != EventArg::Kind::kEntity) {
          violations.push_back(where + ": event theme on non-regulation");
          break;
        }
      }
    }
  }

  // Cycle detection over event references.
  std::vector<int> color(n, 0);
  std::function<bool(int)> has_cycle = [&](int i) {
    color[i] = 1;
    const Event &ev = set.events[i];
    std::vector<int> next;
    for (const EventArg &th : ev.themes) {
      if (th.kind == EventArg::Kind::kEvent) next.push_back(th.event);
    }
    if (ev.cause && ev.cause->kind == EventArg::Kind::kEvent) {
      next.push_back(ev.cause->event);
    }
    for (int j : next) {
      if (j < 0 || j >= n) continue;
      if (color[j] == 1 || j == i) return true;
      if (color[j] == 0 && has_cycle(j)) return true;
    }
    color[i] = 2;
    return false;
  };
  for (int i = 0; i < n; ++i) {
    if (color[i] == 0 && has_cycle(i)) {
      violations.push_back("nesting cycle through event " + std::to_string(i));
      break;
    }
  }
  return violations;
}

EventQuadrupleSet FromGoldEvents(const Document &doc) {
  std::unordered_map<std::string, int> index_of;
  for (int i = 0; i < static_cast<int>(doc.events.size()); ++i) {
    index_of[doc.events[i].id] = i;
  }
  EventQuadrupleSet set;
  std::vector<int> placed(doc.events.size(), -1);
  std::vector<bool> active(doc.events.size(), false);

  std::function<int(int)> place = [&](int g) -> int {
    if (placed[g] >= 0) return placed[g];
    const GoldEvent &gold = doc.events[g];
    if (active[g]) {
      throw Error(ErrorCode::kDanglingRef,
                  "cyclic event reference through " + gold.id);
    }
    active[g] = true;
    auto convert = [&](const ArgRef &ref) {
      if (ref.kind == ArgRef::Kind::kEntity) {
        const EntityMention *e = doc.FindEntity(ref.id);
        if (!e) {
          throw Error(ErrorCode::kDanglingRef,
                      gold.id + " references unknown entity " + ref.id);
        }
        return EventArg::Entity(e->id, e->span);
      }
      auto it = index_of.find(ref.id);
      if (it == index_of.end()) {
        throw Error(ErrorCode::kDanglingRef,
                    gold.id + " references unknown event " + ref.id);
      }
      return EventArg::Event(place(it->second));
    };
    Event ev;
    ev.type = gold.type;
    ev.trigger = gold.trigger;
    for (const ArgRef &th : gold.themes) ev.themes.push_back(convert(th));
    if (gold.cause) ev.cause = convert(*gold.cause);
    active[g] = false;
    placed[g] = set.size();
    set.events.push_back(std::move(ev));
    return placed[g];
  };
  for (int g = 0; g < static_cast<int>(doc.events.size()); ++g) place(g);
  return set;
}

void ShiftEvents(int offset, EventQuadrupleSet *set) {
  auto shift = [offset](Span &s) {
    s.start += offset;
    s.end += offset;
  };
  for (Event &ev : set->events) {
    shift(ev.trigger.span);
    for (EventArg &th : ev.themes) {
      if (th.kind == EventArg::Kind::kEntity) shift(th.span);
    }
    if (ev.cause && ev.cause->kind == EventArg::Kind::kEntity) {
      shift(ev.cause->span);
    }
  }
}

std::string EventSignature(const EventQuadrupleSet &set, int index) {
  auto arg_sig = [&](const EventArg &arg) {
    if (arg.kind == EventArg::Kind::kEntity) return "T" + SpanText(arg.span);
    return "E{" + EventSignature(set, arg.event) + "}";
  };
  const Event &ev = set.events[index];
  std::vector<std::string> themes;
  for (const EventArg &th : ev.themes) themes.push_back(arg_sig(th));
  std::sort(themes.begin(), themes.end());
  std::string sig = std::string(EventTypeAbbrev(ev.type)) +
                    SpanText(ev.trigger.span) + "(";
  for (size_t i = 0; i < themes.size(); ++i) {
    if (i) sig += ",";
    sig += "Theme:" + themes[i];
  }
  if (ev.cause) sig += ";Cause:" + arg_sig(*ev.cause);
  return sig + ")";
}

std::vector<std::string> SortedSignatures(const EventQuadrupleSet &set) {
  std::vector<std::string> sigs;
  for (int i = 0; i < set.size(); ++i) sigs.push_back(EventSignature(set, i));
  std::sort(sigs.begin(), sigs.end());
  return sigs;
}

}  // namespace mlsl
