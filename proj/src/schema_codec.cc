#include "mlsl/schema_codec.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>

#include "mlsl/error.h"
#include "mlsl/utf8.h"

namespace mlsl {
namespace {

int CodepointLength(std::string_view s) {
  return static_cast<int>(CharIndex(s).size());
}

std::vector<const EntityMention *> SortedEntities(const Document &doc) {
  std::vector<const EntityMention *> sorted;
  for (const EntityMention &e : doc.entities) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const EntityMention *a, const EntityMention *b) {
              return std::tie(a->span.start, a->span.end) <
                     std::tie(b->span.start, b->span.end);
            });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->span.start < sorted[i - 1]->span.end) {
      throw Error(ErrorCode::kOverlappingEntities,
                  "entities " + sorted[i - 1]->id + " and " + sorted[i]->id +
                      " overlap in " + doc.doc_id);
    }
  }
  return sorted;
}

// Tokens whose character span intersects `span`; empty range if none.
TokenRange TokensCovering(const TokenizedSentence &s, Span span) {
  TokenRange r{-1, -1};
  for (int t = s.special_head ? 1 : 0; t < s.size(); ++t) {
    const Span &cs = s.char_spans[t];
    if (cs.start < span.end && span.start < cs.end) {
      if (r.begin < 0) r.begin = t;
      r.end = t + 1;
    }
  }
  if (r.begin < 0) return TokenRange{0, 0};
  return r;
}

bool Overlaps(TokenRange a, TokenRange b) {
  return a.begin < b.end && b.begin < a.end;
}

// Position of `owner` as seen from `arg`, counting the trigger mentions that
// lie strictly between them. nullopt when the two ranges overlap.
std::optional<ArgPosition> RelativePosition(
    TokenRange arg, TokenRange owner, const std::vector<TokenRange> &mentions) {
  if (Overlaps(arg, owner)) return std::nullopt;
  ArgPosition pos;
  int between = 0;
  if (owner.end <= arg.begin) {
    pos.direction = Direction::kLeft;
    for (const TokenRange &m : mentions) {
      if (m != owner && m.begin >= owner.end && m.end <= arg.begin) ++between;
    }
  } else {
    pos.direction = Direction::kRight;
    for (const TokenRange &m : mentions) {
      if (m != owner && m.begin >= arg.end && m.end <= owner.begin) ++between;
    }
  }
  pos.rank = between + 1;
  return pos;
}

void WriteArgRun(TokenRange r, ArgPosition pos, std::vector<ArgLabel> *layer) {
  for (int t = r.begin; t < r.end; ++t) {
    (*layer)[t] = MakeArgLabel(t == r.begin, pos);
  }
}

struct ArgRun {
  TokenRange tokens;
  ArgPosition position;
};

std::vector<ArgRun> ExtractArgRuns(std::span<const ArgLabel> labels,
                                   int *repaired) {
  std::vector<ArgRun> runs;
  for (int t = 0; t < static_cast<int>(labels.size()); ++t) {
    std::optional<ArgPosition> pos = ArgLabelPosition(labels[t]);
    if (!pos) continue;
    bool extends = !ArgLabelIsBegin(labels[t]) && !runs.empty() &&
                   runs.back().tokens.end == t && runs.back().position == *pos;
    if (extends) {
      runs.back().tokens.end = t + 1;
      continue;
    }
    if (!ArgLabelIsBegin(labels[t]) && repaired) ++*repaired;
    runs.push_back({TokenRange{t, t + 1}, *pos});
  }
  return runs;
}

}  // namespace

std::string_view RoleName(Role role) {
  return role == Role::kTheme ? "Theme" : "Cause";
}

std::string EntityMaskToken(std::string_view etype) {
  std::string out = "@";
  for (char c : etype) {
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  out += "@";
  return out;
}

TokenizedSentence TokenizeAndMask(const Document &sentence,
                                  const SubwordVocab &vocab,
                                  const TokenizeOptions &options) {
  CharIndex index(sentence.text);
  const int length = static_cast<int>(index.size());
  for (const EntityMention &e : sentence.entities) {
    if (e.span.start < 0 || e.span.end > length || e.span.start >= e.span.end) {
      throw Error(ErrorCode::kSpanMismatch,
                  "entity " + e.id + " span outside text of " +
                      sentence.doc_id);
    }
  }
  std::vector<const EntityMention *> entities = SortedEntities(sentence);

  TokenizedSentence out;
  out.source_text = sentence.text;
  out.special_head = options.special_head;
  auto push = [&](std::string token, Span span, const EntityMention *entity) {
    out.token_ids.push_back(vocab.Id(token));
    out.tokens.push_back(std::move(token));
    out.char_spans.push_back(span);
    out.is_entity_mask.push_back(entity != nullptr);
    out.entity_ids.push_back(entity ? entity->id : std::string());
    out.entity_types.push_back(entity ? entity->etype : std::string());
  };
  if (options.special_head) push(std::string(SubwordVocab::kHead), {0, 0}, nullptr);

  auto emit_text = [&](int begin, int end) {
    for (const WordToken &word : SplitWords(sentence.text, index, begin, end)) {
      std::vector<std::string> pieces = vocab.Segment(word.text);
      if (pieces.size() == 1 && pieces[0] == SubwordVocab::kUnk) {
        push(pieces[0], {word.start, word.end}, nullptr);
        continue;
      }
      int pos = word.start;
      for (std::string &piece : pieces) {
        int len = CodepointLength(piece) - (pos == word.start ? 0 : 2);
        push(std::move(piece), {pos, pos + len}, nullptr);
        pos += len;
      }
    }
  };

  int cursor = 0;
  for (const EntityMention *e : entities) {
    emit_text(cursor, e->span.start);
    push(EntityMaskToken(e->etype), e->span, e);
    cursor = e->span.end;
  }
  emit_text(cursor, length);
  return out;
}

void ExtendVocab(const Document &sentence, SubwordVocab *vocab) {
  CharIndex index(sentence.text);
  std::vector<const EntityMention *> entities = SortedEntities(sentence);
  int cursor = 0;
  auto add_words = [&](int begin, int end) {
    for (const WordToken &w : SplitWords(sentence.text, index, begin, end)) {
      vocab->Add(w.text);
    }
  };
  for (const EntityMention *e : entities) {
    add_words(cursor, e->span.start);
    vocab->Add(EntityMaskToken(e->etype));
    cursor = e->span.end;
  }
  add_words(cursor, static_cast<int>(index.size()));
}

EncodeResult EncodeLabels(const TokenizedSentence &sentence,
                          std::span<const GoldEvent> events,
                          const TriggerLabelSpace &space) {
  const int n = sentence.size();
  EncodeResult result;
  LabelFrame &frame = result.frame;
  EncodeStats &stats = result.stats;
  frame.trigger.assign(n, TriggerLabelSpace::kOutside);
  frame.theme.assign(n, ArgLabel::kO);
  frame.cause.assign(n, ArgLabel::kO);

  std::unordered_map<std::string, int> entity_token;
  for (int t = 0; t < n; ++t) {
    if (!sentence.is_entity_mask[t]) continue;
    frame.trigger[t] = space.EntityBegin(sentence.entity_types[t]);
    entity_token[sentence.entity_ids[t]] = t;
  }

  // Distinct trigger mentions keyed by (span, type).
  std::map<std::pair<Span, EventType>, std::optional<TokenRange>> mention_of;
  std::vector<TokenRange> mentions;
  for (const GoldEvent &ev : events) {
    auto key = std::make_pair(ev.trigger.span, ev.type);
    if (mention_of.count(key)) continue;
    TokenRange r = TokensCovering(sentence, ev.trigger.span);
    bool ok = r.end > r.begin;
    for (int t = r.begin; ok && t < r.end; ++t) {
      if (frame.trigger[t] != TriggerLabelSpace::kOutside) ok = false;
    }
    if (!ok) {
      if (r.end > r.begin) ++stats.trigger_collisions;
      mention_of[key] = std::nullopt;
      continue;
    }
    for (int t = r.begin; t < r.end; ++t) {
      frame.trigger[t] =
          t == r.begin ? space.Begin(ev.type) : space.Inside(ev.type);
    }
    mention_of[key] = r;
    mentions.push_back(r);
  }

  std::unordered_map<std::string, const GoldEvent *> event_by_id;
  for (const GoldEvent &ev : events) event_by_id[ev.id] = &ev;

  auto arg_tokens = [&](const ArgRef &ref) -> std::optional<TokenRange> {
    if (ref.kind == ArgRef::Kind::kEntity) {
      auto it = entity_token.find(ref.id);
      if (it == entity_token.end()) return std::nullopt;
      return TokenRange{it->second, it->second + 1};
    }
    auto it = event_by_id.find(ref.id);
    if (it == event_by_id.end()) return std::nullopt;
    auto m = mention_of.find({it->second->trigger.span, it->second->type});
    if (m == mention_of.end()) return std::nullopt;
    return m->second;
  };

  // Distinct pairs: (owner, role, argument). A missing owner or argument is
  // recorded with an empty range so it is counted once.
  std::set<std::tuple<TokenRange, Role, TokenRange>> pairs;
  std::set<std::tuple<std::string, EventType, Role, std::string>> unaligned;
  for (const GoldEvent &ev : events) {
    std::optional<TokenRange> owner =
        mention_of.at({ev.trigger.span, ev.type});
    auto add = [&](const ArgRef &ref, Role role) {
      std::optional<TokenRange> arg = arg_tokens(ref);
      if (!owner || !arg) {
        unaligned.insert({ev.trigger.id, ev.type, role, ref.id});
        return;
      }
      pairs.insert({*owner, role, *arg});
    };
    for (const ArgRef &theme : ev.themes) add(theme, Role::kTheme);
    if (ev.cause) add(*ev.cause, Role::kCause);
  }
  stats.unaligned_drops = static_cast<int>(unaligned.size());
  stats.pairs = static_cast<int>(pairs.size() + unaligned.size());

  // Candidate label per (layer, argument range); nearer owners win, ties go
  // to the left owner.
  std::map<std::pair<Role, TokenRange>, std::vector<ArgPosition>> claims;
  for (const auto &[owner, role, arg] : pairs) {
    std::optional<ArgPosition> pos = RelativePosition(arg, owner, mentions);
    if (!pos) {
      ++stats.unaligned_drops;
      continue;
    }
    if (pos->rank > 2) {
      ++stats.distance_drops;
      continue;
    }
    claims[{role, arg}].push_back(*pos);
  }
  for (auto &[key, positions] : claims) {
    std::sort(positions.begin(), positions.end(),
              [](const ArgPosition &a, const ArgPosition &b) {
                return std::make_pair(a.rank, a.direction == Direction::kRight) <
                       std::make_pair(b.rank, b.direction == Direction::kRight);
              });
    const auto &[role, arg] = key;
    std::vector<ArgLabel> &layer =
        role == Role::kTheme ? frame.theme : frame.cause;
    for (int t = arg.begin; t < arg.end; ++t) {
      if (layer[t] != ArgLabel::kO) {
        throw Error(ErrorCode::kLabelCollision,
                    "overlapping argument spans in one layer at token " +
                        std::to_string(t));
      }
    }
    WriteArgRun(arg, positions.front(), &layer);
    ++stats.kept;
    stats.collision_drops += static_cast<int>(positions.size()) - 1;
  }
  return result;
}

std::vector<TriggerRun> ExtractTriggerRuns(std::span<const int> labels,
                                           const TriggerLabelSpace &space,
                                           int *repaired) {
  std::vector<TriggerRun> runs;
  for (int t = 0; t < static_cast<int>(labels.size()); ++t) {
    if (!space.IsTrigger(labels[t])) continue;
    const TriggerLabelSpace::Info &info = space.info(labels[t]);
    bool extends = !info.begin && !runs.empty() &&
                   runs.back().tokens.end == t &&
                   runs.back().type == info.event_type;
    if (extends) {
      runs.back().tokens.end = t + 1;
      continue;
    }
    if (!info.begin && repaired) ++*repaired;
    runs.push_back({TokenRange{t, t + 1}, info.event_type});
  }
  return runs;
}

DecodeResult DecodeLabels(const TokenizedSentence &sentence,
                          const LabelFrame &frame,
                          const TriggerLabelSpace &space) {
  const int n = sentence.size();
  if (frame.size() != n || static_cast<int>(frame.theme.size()) != n ||
      static_cast<int>(frame.cause.size()) != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "label frame length does not match token count");
  }
  DecodeResult result;
  CharIndex index(sentence.source_text);
  std::vector<TokenRange> mentions;
  for (const TriggerRun &run :
       ExtractTriggerRuns(frame.trigger, space, &result.stats.repaired)) {
    DecodedTrigger trig;
    trig.tokens = run.tokens;
    trig.mention.type = run.type;
    trig.mention.span = {sentence.char_spans[run.tokens.begin].start,
                         sentence.char_spans[run.tokens.end - 1].end};
    trig.mention.surface = index.Slice(sentence.source_text,
                                       trig.mention.span.start,
                                       trig.mention.span.end);
    result.triggers.push_back(std::move(trig));
    mentions.push_back(run.tokens);
  }

  for (Role role : {Role::kTheme, Role::kCause}) {
    const std::vector<ArgLabel> &layer =
        role == Role::kTheme ? frame.theme : frame.cause;
    for (const ArgRun &run : ExtractArgRuns(layer, &result.stats.repaired)) {
      // Owner: the rank-th trigger mention on the labelled side.
      std::vector<int> side;
      for (int m = 0; m < static_cast<int>(mentions.size()); ++m) {
        bool left = mentions[m].end <= run.tokens.begin;
        bool right = mentions[m].begin >= run.tokens.end;
        if (run.position.direction == Direction::kLeft ? left : right) {
          side.push_back(m);
        }
      }
      if (run.position.direction == Direction::kLeft) {
        std::reverse(side.begin(), side.end());
      }
      if (static_cast<int>(side.size()) < run.position.rank) {
        ++result.stats.unresolved;
        continue;
      }
      int owner = side[run.position.rank - 1];

      int entity_token = -1;
      int entity_count = 0;
      for (int t = run.tokens.begin; t < run.tokens.end; ++t) {
        if (sentence.is_entity_mask[t]) {
          entity_token = t;
          ++entity_count;
        }
      }
      int arg_trigger = -1;
      int trigger_count = 0;
      for (int m = 0; m < static_cast<int>(mentions.size()); ++m) {
        if (Overlaps(mentions[m], run.tokens)) {
          arg_trigger = m;
          ++trigger_count;
        }
      }

      ArgLink link;
      link.trigger = owner;
      link.role = role;
      if (trigger_count == 1 && entity_count == 0) {
        link.kind = ArgLink::Kind::kTrigger;
        link.arg_trigger = arg_trigger;
        link.tokens = mentions[arg_trigger];
        link.span = result.triggers[arg_trigger].mention.span;
      } else if (entity_count == 1 && trigger_count == 0) {
        link.kind = ArgLink::Kind::kEntity;
        link.tokens = {entity_token, entity_token + 1};
        link.span = sentence.char_spans[entity_token];
        link.entity_id = sentence.entity_ids[entity_token];
      } else {
        ++result.stats.unattached;
        continue;
      }
      if (std::find(result.links.begin(), result.links.end(), link) ==
          result.links.end()) {
        result.links.push_back(std::move(link));
      }
    }
  }
  return result;
}

}  // namespace mlsl
