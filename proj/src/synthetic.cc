#include "mlsl/synthetic.h"

#include <array>
#include <filesystem>

#include "mlsl/nn/tensor.h"
#include "mlsl/standoff.h"
#include "mlsl/utf8.h"

namespace mlsl::synthetic {
namespace {

constexpr std::array<std::string_view, 12> kProteins = {
    "BMP-6", "Smad1",  "TRAF2", "IL-2",  "NF-kappaB", "STAT3",
    "p53",   "c-Myc",  "CD40",  "TNF-alpha", "IkB",   "Jak1"};

constexpr std::array<std::string_view, 8> kFillers = {
    "the", "of", "in", "cells", "was", "and", "with", "then"};

std::string_view Pick(nn::Rng *rng, std::span<const std::string_view> items) {
  return items[rng->Below(items.size())];
}

// Distinct protein names.
std::vector<std::string_view> Proteins(nn::Rng *rng, int count) {
  std::vector<std::string_view> pool(kProteins.begin(), kProteins.end());
  std::vector<std::string_view> out;
  for (int i = 0; i < count; ++i) {
    size_t k = rng->Below(pool.size());
    out.push_back(pool[k]);
    pool.erase(pool.begin() + k);
  }
  return out;
}

using B = DocumentBuilder;

void MixedTemplate(int which, nn::Rng *rng, DocumentBuilder *b) {
  std::vector<std::string_view> p = Proteins(rng, 3);
  switch (which) {
    case 0: {
      std::string p1 = b->Entity(p[0]);
      TriggerMention induced = b->Trigger("induced", EventType::kPositiveRegulation);
      TriggerMention phos = b->Trigger("phosphorylation", EventType::kPhosphorylation);
      b->Word("of");
      std::string p2 = b->Entity(p[1]);
      std::string e1 = b->AddEvent(EventType::kPhosphorylation, phos, {B::EntityRef(p2)});
      b->AddEvent(EventType::kPositiveRegulation, induced, {B::EventRef(e1)},
                  B::EntityRef(p1));
      break;
    }
    case 1: {
      std::string p1 = b->Entity(p[0]);
      TriggerMention binds = b->Trigger("binds", EventType::kBinding);
      b->Word("to");
      std::string p2 = b->Entity(p[1]);
      b->Words("in vitro");
      b->AddEvent(EventType::kBinding, binds, {B::EntityRef(p1), B::EntityRef(p2)});
      break;
    }
    case 2: {
      TriggerMention expr = b->Trigger("expression", EventType::kGeneExpression);
      b->Word("of");
      std::string p1 = b->Entity(p[0]);
      b->Word("was");
      TriggerMention inc = b->Trigger("increased", EventType::kPositiveRegulation);
      b->Word("by");
      std::string p2 = b->Entity(p[1]);
      std::string e1 = b->AddEvent(EventType::kGeneExpression, expr, {B::EntityRef(p1)});
      b->AddEvent(EventType::kPositiveRegulation, inc, {B::EventRef(e1)},
                  B::EntityRef(p2));
      break;
    }
    case 3: {
      std::string p1 = b->Entity(p[0]);
      TriggerMention inh = b->Trigger("inhibits", EventType::kNegativeRegulation);
      b->Word("the");
      TriggerMention tr = b->Trigger("transcription", EventType::kTranscription);
      b->Word("of");
      std::string p2 = b->Entity(p[1]);
      std::string e1 = b->AddEvent(EventType::kTranscription, tr, {B::EntityRef(p2)});
      b->AddEvent(EventType::kNegativeRegulation, inh, {B::EventRef(e1)},
                  B::EntityRef(p1));
      break;
    }
    case 4: {
      TriggerMention deg = b->Trigger("degradation", EventType::kProteinCatabolism);
      b->Word("of");
      std::string p1 = b->Entity(p[0]);
      b->Word("was");
      TriggerMention blk = b->Trigger("blocked", EventType::kNegativeRegulation);
      b->Words("in these cells");
      std::string e1 = b->AddEvent(EventType::kProteinCatabolism, deg, {B::EntityRef(p1)});
      b->AddEvent(EventType::kNegativeRegulation, blk, {B::EventRef(e1)});
      break;
    }
    case 5: {
      std::string p1 = b->Entity(p[0]);
      b->Word("is");
      TriggerMention loc = b->Trigger("localized", EventType::kLocalization);
      b->Words("to the nucleus");
      b->AddEvent(EventType::kLocalization, loc, {B::EntityRef(p1)});
      break;
    }
    case 6: {
      std::string p1 = b->Entity(p[0]);
      TriggerMention reg = b->Trigger("regulates", EventType::kRegulation);
      b->Word("the");
      TriggerMention expr = b->Trigger("expression", EventType::kGeneExpression);
      b->Word("of");
      std::string p2 = b->Entity(p[1]);
      std::string e1 = b->AddEvent(EventType::kGeneExpression, expr, {B::EntityRef(p2)});
      b->AddEvent(EventType::kRegulation, reg, {B::EventRef(e1)}, B::EntityRef(p1));
      break;
    }
    default: {
      TriggerMention inter = b->Trigger("interaction", EventType::kBinding);
      b->Word("of");
      std::string p1 = b->Entity(p[0]);
      b->Word("with");
      std::string p2 = b->Entity(p[1]);
      TriggerMention req = b->Trigger("requires", EventType::kPositiveRegulation);
      std::string p3 = b->Entity(p[2]);
      std::string e1 = b->AddEvent(EventType::kBinding, inter,
                                   {B::EntityRef(p1), B::EntityRef(p2)});
      b->AddEvent(EventType::kPositiveRegulation, req, {B::EventRef(e1)},
                  B::EntityRef(p3));
      break;
    }
  }
  b->Word(".");
}

struct SepType {
  EventType type;
  std::array<std::string_view, 3> words;
  bool theme_right;
  bool has_cause;  // cause on the other side
};

constexpr std::array<SepType, 4> kSepTypes = {{
    {EventType::kGeneExpression, {"expression", "expressed", "production"}, true, false},
    {EventType::kPhosphorylation, {"phosphorylation", "phosphorylated", "phosphorylates"}, false, false},
    {EventType::kPositiveRegulation, {"activation", "induction", "upregulation"}, true, true},
    {EventType::kNegativeRegulation, {"inhibition", "suppression", "repression"}, false, true},
}};

}  // namespace

DocumentBuilder::DocumentBuilder(std::string doc_id) {
  doc_.doc_id = std::move(doc_id);
}

Span DocumentBuilder::Word(std::string_view word) {
  if (!doc_.text.empty()) doc_.text += ' ';
  const int start = CharIndex(doc_.text).size();
  doc_.text += word;
  return Span{start, start + static_cast<int>(CharIndex(word).size())};
}

void DocumentBuilder::Words(std::string_view space_separated) {
  size_t pos = 0;
  while (pos < space_separated.size()) {
    size_t end = space_separated.find(' ', pos);
    if (end == std::string_view::npos) end = space_separated.size();
    if (end > pos) Word(space_separated.substr(pos, end - pos));
    pos = end + 1;
  }
}

std::string DocumentBuilder::Entity(std::string_view surface,
                                    std::string_view etype) {
  Span span = Word(surface);
  std::string id = "T" + std::to_string(doc_.entities.size() + 1);
  doc_.entities.push_back({id, std::string(etype), span, std::string(surface)});
  return id;
}

TriggerMention DocumentBuilder::Trigger(std::string_view surface, EventType type) {
  Span span = Word(surface);
  return TriggerMention{"TR" + std::to_string(++next_trigger_), type, span,
                        std::string(surface)};
}

std::string DocumentBuilder::AddEvent(EventType type, const TriggerMention &trigger,
                                      std::vector<ArgRef> themes,
                                      std::optional<ArgRef> cause) {
  std::string id = "E" + std::to_string(doc_.events.size() + 1);
  doc_.events.push_back({id, type, trigger, std::move(themes), std::move(cause)});
  return id;
}

Document DocumentBuilder::Build() const {
  // Trigger ids continue after the entity ids, as in the shared-task files.
  Document d = doc_;
  const int base = static_cast<int>(d.entities.size());
  for (GoldEvent &ev : d.events) {
    ev.trigger.id = "T" + std::to_string(base + std::stoi(ev.trigger.id.substr(2)));
  }
  return d;
}

std::vector<Document> MixedCorpus(int count, uint64_t seed) {
  nn::Rng rng(seed);
  std::vector<Document> docs;
  for (int i = 0; i < count; ++i) {
    DocumentBuilder b("mixed" + std::to_string(1000 + i).substr(1));
    MixedTemplate(i % 8, &rng, &b);
    docs.push_back(b.Build());
  }
  return docs;
}

Document NestedExampleDocument() {
  DocumentBuilder b("nested");
  std::string bmp = b.Entity("BMP-6");
  TriggerMention induced = b.Trigger("induced", EventType::kPositiveRegulation);
  TriggerMention phos = b.Trigger("phosphorylation", EventType::kPhosphorylation);
  b.Word("of");
  std::string smad = b.Entity("Smad1/5/8");
  b.Word(".");
  std::string e1 = b.AddEvent(EventType::kPhosphorylation, phos, {B::EntityRef(smad)});
  b.AddEvent(EventType::kPositiveRegulation, induced, {B::EventRef(e1)},
             B::EntityRef(bmp));
  return b.Build();
}

std::vector<Document> SeparabilityCorpus(int count, uint64_t seed,
                                         std::string_view id_prefix) {
  nn::Rng rng(seed);
  std::vector<Document> docs;
  auto fillers = [&](DocumentBuilder *b) {
    const int n = 1 + static_cast<int>(rng.Below(3));
    for (int k = 0; k < n; ++k) b->Word(Pick(&rng, kFillers));
  };
  for (int i = 0; i < count; ++i) {
    const int triggers = 2 + static_cast<int>(rng.Below(3));
    // Types: reject a choice whose claim on the shared entity collides with
    // the previous trigger's claim in the same layer.
    std::vector<int> types;
    while (static_cast<int>(types.size()) < triggers) {
      int t = static_cast<int>(rng.Below(kSepTypes.size()));
      if (!types.empty()) {
        const SepType &prev = kSepTypes[types.back()];
        const SepType &cur = kSepTypes[t];
        bool prev_theme_right = prev.theme_right;
        bool prev_cause_right = prev.has_cause && !prev.theme_right;
        bool cur_theme_left = !cur.theme_right;
        bool cur_cause_left = cur.has_cause && cur.theme_right;
        if ((prev_theme_right && cur_theme_left) ||
            (prev_cause_right && cur_cause_left)) {
          continue;
        }
      }
      types.push_back(t);
    }
    std::vector<std::string_view> names = Proteins(&rng, triggers + 1);
    DocumentBuilder b(std::string(id_prefix) + std::to_string(10000 + i).substr(1));
    std::vector<std::string> entities;
    std::vector<TriggerMention> mentions;
    entities.push_back(b.Entity(names[0]));
    for (int k = 0; k < triggers; ++k) {
      fillers(&b);
      const SepType &st = kSepTypes[types[k]];
      mentions.push_back(b.Trigger(Pick(&rng, st.words), st.type));
      fillers(&b);
      entities.push_back(b.Entity(names[k + 1]));
    }
    b.Word(".");
    for (int k = 0; k < triggers; ++k) {
      const SepType &st = kSepTypes[types[k]];
      const std::string &left = entities[k];
      const std::string &right = entities[k + 1];
      std::optional<ArgRef> cause;
      if (st.has_cause) cause = B::EntityRef(st.theme_right ? left : right);
      b.AddEvent(st.type, mentions[k],
                 {B::EntityRef(st.theme_right ? right : left)}, cause);
    }
    docs.push_back(b.Build());
  }
  return docs;
}

std::vector<Document> DistanceCorpus(int pairs, int far) {
  std::vector<Document> docs;
  int id = 0;
  auto next_id = [&]() { return "dist" + std::to_string(1000 + id++).substr(1); };
  for (int k = 0; k < far; ++k) {
    // expression , phosphorylation of A , transcription of B and C
    // Gene_expression(C) has two mentions in between.
    DocumentBuilder b(next_id());
    TriggerMention expr = b.Trigger("expression", EventType::kGeneExpression);
    b.Word(",");
    TriggerMention phos = b.Trigger("phosphorylation", EventType::kPhosphorylation);
    b.Word("of");
    std::string a = b.Entity("TRAF2");
    b.Word(",");
    TriggerMention tr = b.Trigger("transcription", EventType::kTranscription);
    b.Word("of");
    std::string bb = b.Entity("STAT3");
    b.Word("and");
    std::string c = b.Entity("p53");
    b.Word(".");
    b.AddEvent(EventType::kGeneExpression, expr, {B::EntityRef(c)});
    b.AddEvent(EventType::kPhosphorylation, phos, {B::EntityRef(a)});
    b.AddEvent(EventType::kTranscription, tr, {B::EntityRef(bb)});
    docs.push_back(b.Build());
  }
  for (int k = 0; k < pairs - 3 * far; ++k) {
    DocumentBuilder b(next_id());
    TriggerMention expr = b.Trigger("expression", EventType::kGeneExpression);
    b.Word("of");
    std::string p = b.Entity(kProteins[k % kProteins.size()]);
    b.Word(".");
    b.AddEvent(EventType::kGeneExpression, expr, {B::EntityRef(p)});
    docs.push_back(b.Build());
  }
  return docs;
}

void WriteCorpus(const std::string &dir, const std::vector<Document> &docs) {
  std::filesystem::create_directories(dir);
  for (const Document &d : docs) WriteDocument(dir, d, true);
}

}  // namespace mlsl::synthetic
