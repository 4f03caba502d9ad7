#include <set>

#include "mlsl/events.h"
#include "mlsl/pipeline.h"
#include "mlsl/standoff.h"
#include "test_support.h"

namespace mlsl::testing {

std::vector<StandoffFixture> FixtureSuite() {
  return {
      {"nested", "BMP-6 rapidly induced phosphorylation of Smad1/5/8",
       "T1\tGENE 0 5\tBMP-6\n"
       "T2\tGENE 41 50\tSmad1/5/8\n",
       "T3\tPositive_regulation 14 21\tinduced\n"
       "T4\tPhosphorylation 22 37\tphosphorylation\n"
       "E1\tPhosphorylation:T4 Theme:T2\n"
       "E2\tPositive_regulation:T3 Theme:E1 Cause:T1\n"},
      {"promote", "FOXP3 promoting factors, such as dexamethasone, CTLA-4",
       "T1\tProtein 0 5\tFOXP3\n"
       "T2\tProtein 48 54\tCTLA-4\n",
       "T3\tPositive_regulation 6 15\tpromoting\n"
       "E1\tPositive_regulation:T3 Theme:T1 Cause:T2\n"},
      {"twosent",
       "TRAF2 binds to CD40 in vitro. Expression of STAT3 was increased by IL-2.",
       "T1\tProtein 0 5\tTRAF2\n"
       "T2\tProtein 15 19\tCD40\n"
       "T3\tProtein 44 49\tSTAT3\n"
       "T4\tProtein 67 71\tIL-2\n",
       "T5\tBinding 6 11\tbinds\n"
       "T6\tGene_expression 30 40\tExpression\n"
       "T7\tPositive_regulation 54 63\tincreased\n"
       "E1\tBinding:T5 Theme:T1 Theme2:T2\n"
       "E2\tGene_expression:T6 Theme:T3\n"
       "E3\tPositive_regulation:T7 Theme:E2 Cause:T4\n"},
      {"inhib", "p53 expression was inhibited by MDM2 in these cells.",
       "T1\tProtein 0 3\tp53\n"
       "T2\tProtein 32 36\tMDM2\n",
       "T3\tGene_expression 4 14\texpression\n"
       "T4\tNegative_regulation 19 28\tinhibited\n"
       "E1\tNegative_regulation:T4 Theme:E2 Cause:T2\n"
       "E2\tGene_expression:T3 Theme:T1\n"},
      {"unicode", "TNF-α induces expression of IκBα.",
       "T1\tProtein 0 5\tTNF-α\n"
       "T2\tProtein 28 32\tIκBα\n",
       "T3\tPositive_regulation 6 13\tinduces\n"
       "T4\tGene_expression 14 24\texpression\n"
       "E1\tGene_expression:T4 Theme:T2\n"
       "E2\tPositive_regulation:T3 Theme:E1 Cause:T1\n"},
  };
}

Document ParseFixture(const StandoffFixture &f) {
  return ParseDocument(f.id, f.txt, f.a1, f.a2);
}

TriggerLabelSpace SpaceFor(const std::vector<Document> &docs) {
  auto events = CorpusEventTypes(Corpus::kGe11);
  return TriggerLabelSpace({events.begin(), events.end()},
                           CollectEntityTypes(docs));
}

SubwordVocab VocabFor(const std::vector<Document> &docs) {
  SubwordVocab vocab;
  for (const Document &d : docs) ExtendVocab(d, &vocab);
  return vocab;
}

EventQuadrupleSet AssembleFromGoldFrames(const Document &doc,
                                         const SubwordVocab &vocab,
                                         const TriggerLabelSpace &space) {
  EventQuadrupleSet out;
  for (const Document &s : SplitSentences(doc).sentences) {
    TokenizedSentence tokens = TokenizeAndMask(s, vocab);
    EncodeResult enc = EncodeLabels(tokens, s.events, space);
    DecodeResult dec = DecodeLabels(tokens, enc.frame, space);
    AssemblyResult assembled = Assemble(dec.triggers, dec.links);
    ShiftEvents(s.base_offset, &assembled.events);
    const int base = out.size();
    for (Event &ev : assembled.events.events) {
      for (EventArg &a : ev.themes) {
        if (a.kind == EventArg::Kind::kEvent) a.event += base;
      }
      if (ev.cause && ev.cause->kind == EventArg::Kind::kEvent) ev.cause->event += base;
      out.events.push_back(ev);
    }
  }
  return out;
}

namespace {

ScoredDocument Scored(const StandoffFixture &f, const std::string &a2) {
  Document doc = ParseDocument(f.id, f.txt, f.a1, a2);
  return {f.id, f.txt, FromGoldEvents(doc)};
}

}  // namespace

ScoredPair PartialSubEventCase() {
  StandoffFixture f = FixtureSuite()[0];
  std::string wrong_theme =
      "T3\tPositive_regulation 14 21\tinduced\n"
      "T4\tPhosphorylation 22 37\tphosphorylation\n"
      "E1\tPhosphorylation:T4 Theme:T1\n"
      "E2\tPositive_regulation:T3 Theme:E1 Cause:T1\n";
  return {Scored(f, wrong_theme), Scored(f, f.a2)};
}

ScoredPair TwoOfThreeCase() {
  StandoffFixture f = FixtureSuite()[2];
  std::string pred =
      "T5\tBinding 6 11\tbinds\n"
      "T6\tGene_expression 30 40\tExpression\n"
      "T7\tPositive_regulation 54 63\tincreased\n"
      "T8\tPhosphorylation 54 63\tincreased\n"
      "E1\tBinding:T5 Theme:T1 Theme2:T2\n"
      "E2\tGene_expression:T6 Theme:T3\n"
      "E3\tPositive_regulation:T7 Theme:E2 Cause:T1\n"
      "E4\tPhosphorylation:T8 Theme:T3\n";
  return {Scored(f, pred), Scored(f, f.a2)};
}

std::vector<SpanCase> SpanBoundaryCases() {
  // words: the(0-3) strong(4-10) induction(11-20) of(21-23) gene(24-28)
  //        expression(29-39) was(40-43) seen(44-48)
  const std::string t = "the strong induction of gene expression was seen";
  return {
      {t, {11, 20}, {11, 20}, true},
      {t, {11, 20}, {4, 20}, true},
      {t, {11, 20}, {11, 23}, true},
      {t, {11, 20}, {4, 23}, true},
      {t, {4, 20}, {11, 20}, true},
      {t, {11, 20}, {0, 20}, false},
      {t, {11, 20}, {11, 28}, false},
      {t, {11, 20}, {24, 28}, false},
      {t, {24, 39}, {29, 39}, true},
      {t, {24, 39}, {21, 43}, true},
      {t, {24, 39}, {40, 48}, false},
      {t, {29, 39}, {11, 28}, false},
  };
}

}  // namespace mlsl::testing
