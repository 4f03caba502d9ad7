#include "mlsl/pipeline.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mlsl/error.h"
#include "mlsl/nn/checkpoint.h"
#include "mlsl/utf8.h"

namespace mlsl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void Usage(const std::string &msg) {
  throw Error(ErrorCode::kUsage, msg);
}

template <typename T>
T As(const YAML::Node &node, const std::string &key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    Usage("config: bad value for " + key);
  }
}

nn::MergeStrategy StrategyOrThrow(const std::string &name) {
  auto s = nn::ParseMergeStrategy(name);
  if (!s) Usage("unknown merging strategy: " + name);
  return *s;
}

std::vector<std::string> ListOrScalar(const YAML::Node &node,
                                      const std::string &key) {
  std::vector<std::string> out;
  if (node.IsSequence()) {
    for (const YAML::Node &item : node) out.push_back(As<std::string>(item, key));
    return out;
  }
  std::stringstream ss(As<std::string>(node, key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void Add(EncodeStats *to, const EncodeStats &s) {
  to->pairs += s.pairs;
  to->kept += s.kept;
  to->distance_drops += s.distance_drops;
  to->collision_drops += s.collision_drops;
  to->unaligned_drops += s.unaligned_drops;
  to->trigger_collisions += s.trigger_collisions;
}

void Add(PredictStats *to, const DecodeStats &d, const AssemblyStats &a) {
  to->decode.repaired += d.repaired;
  to->decode.unresolved += d.unresolved;
  to->decode.unattached += d.unattached;
  to->assembly.theme_links += a.theme_links;
  to->assembly.theme_links_used += a.theme_links_used;
  to->assembly.theme_links_dropped += a.theme_links_dropped;
  to->assembly.triggers_without_theme += a.triggers_without_theme;
  to->assembly.cause_drops += a.cause_drops;
  to->assembly.cycle_drops += a.cycle_drops;
}

std::string SeedDir(const std::string &base, uint64_t seed) {
  return base + "/seed-" + std::to_string(seed);
}

double SelectionScore(const ScoreReport &report, const std::string &metric) {
  return metric == "trigger" ? report.trigger.micro.f1()
                             : report.event.micro.f1();
}

std::string Fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

}  // namespace

RunConfig ParseRunConfig(const std::string &yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    Usage(std::string("config: ") + e.what());
  }
  RunConfig c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) Usage("config: expected key: value pairs");
  for (const auto &kv : root) {
    const std::string key = As<std::string>(kv.first, "key");
    const YAML::Node &v = kv.second;
    if (key == "train_dir") {
      c.train_dir = As<std::string>(v, key);
    } else if (key == "dev_dir") {
      c.dev_dir = As<std::string>(v, key);
    } else if (key == "output_dir") {
      c.output_dir = As<std::string>(v, key);
    } else if (key == "vocab") {
      c.vocab = As<std::string>(v, key);
    } else if (key == "corpus") {
      std::string name = As<std::string>(v, key);
      if (name == "ge11") {
        c.corpus = Corpus::kGe11;
      } else if (name == "ge13") {
        c.corpus = Corpus::kGe13;
      } else {
        Usage("config: corpus must be ge11 or ge13");
      }
    } else if (key == "encoder") {
      c.encoder = As<std::string>(v, key);
    } else if (key == "hidden_size") {
      c.model.hidden = As<int>(v, key);
    } else if (key == "max_length") {
      c.model.max_length = As<int>(v, key);
    } else if (key == "merging") {
      c.model.merging.strategy = StrategyOrThrow(As<std::string>(v, key));
    } else if (key == "heads") {
      c.model.merging.heads = As<int>(v, key);
    } else if (key == "head_size") {
      c.model.merging.head_size = As<int>(v, key);
    } else if (key == "dropout") {
      c.model.dropout = As<double>(v, key);
    } else if (key == "layer_dropout") {
      c.model.layer_dropout = As<double>(v, key);
    } else if (key == "special_head") {
      c.model.special_head = As<bool>(v, key);
    } else if (key == "learning_rate") {
      c.adam.learning_rate = As<double>(v, key);
    } else if (key == "beta1") {
      c.adam.beta1 = As<double>(v, key);
    } else if (key == "beta2") {
      c.adam.beta2 = As<double>(v, key);
    } else if (key == "epsilon") {
      c.adam.epsilon = As<double>(v, key);
    } else if (key == "batch_size") {
      c.batch_size = As<int>(v, key);
    } else if (key == "epochs") {
      c.epochs = As<int>(v, key);
    } else if (key == "seeds") {
      c.seeds.clear();
      for (const std::string &s : ListOrScalar(v, key)) {
        try {
          c.seeds.push_back(std::stoull(s));
        } catch (const std::exception &) {
          Usage("config: bad seed " + s);
        }
      }
    } else if (key == "selection_metric") {
      c.selection_metric = As<std::string>(v, key);
    } else if (key == "eval_mode") {
      auto mode = ParseMatchMode(As<std::string>(v, key));
      if (!mode) Usage("config: unknown eval_mode");
      c.eval_mode = *mode;
    } else if (key == "pre_split") {
      c.pre_split = As<bool>(v, key);
    } else if (key == "train_use_predicted_triggers") {
      c.train_use_predicted_triggers = As<double>(v, key);
    } else if (key == "ablate_strategies") {
      c.ablate_strategies.clear();
      for (const std::string &s : ListOrScalar(v, key)) {
        c.ablate_strategies.push_back(StrategyOrThrow(s));
      }
    } else {
      Usage("config: unknown key " + key);
    }
  }
  return c;
}

RunConfig LoadRunConfig(const std::string &path) {
  RunConfig c = ParseRunConfig(ReadFile(path));
  const fs::path base = fs::path(path).parent_path();
  for (std::string *p : {&c.train_dir, &c.dev_dir, &c.output_dir, &c.vocab}) {
    if (!p->empty() && fs::path(*p).is_relative()) *p = (base / *p).string();
  }
  return c;
}

void CheckRunConfig(const RunConfig &c, bool need_train_dir) {
  if (c.encoder == "external") {
    Usage("the external pretrained encoder is not available in this build; use encoder: toy");
  }
  if (c.encoder != "toy") Usage("unknown encoder " + c.encoder);
  if (need_train_dir && c.train_dir.empty()) Usage("train_dir is not set");
  if (!c.train_dir.empty() && !fs::is_directory(c.train_dir)) {
    Usage("train_dir does not exist: " + c.train_dir);
  }
  if (!c.dev_dir.empty() && !fs::is_directory(c.dev_dir)) {
    Usage("dev_dir does not exist: " + c.dev_dir);
  }
  if (!c.vocab.empty() && !fs::exists(c.vocab)) {
    Usage("vocab does not exist: " + c.vocab);
  }
  if (c.seeds.empty()) Usage("seeds must not be empty");
  if (c.batch_size < 1) Usage("batch_size must be positive");
  if (c.epochs < 0) Usage("epochs must be non-negative");
  if (c.model.hidden < 1 || c.model.merging.heads < 1 ||
      c.model.merging.head_size < 1) {
    Usage("hidden_size, heads and head_size must be positive");
  }
  if (c.model.dropout < 0 || c.model.dropout >= 1 || c.model.layer_dropout < 0 ||
      c.model.layer_dropout >= 1) {
    Usage("dropout rates must lie in [0, 1)");
  }
  if (c.train_use_predicted_triggers < 0 || c.train_use_predicted_triggers > 1) {
    Usage("train_use_predicted_triggers must lie in [0, 1]");
  }
  if (c.selection_metric != "event" && c.selection_metric != "trigger") {
    Usage("selection_metric must be event or trigger");
  }
}

double PrepareStats::distance_drop_rate() const {
  return encode.pairs == 0 ? 0.0
                           : static_cast<double>(encode.distance_drops) /
                                 static_cast<double>(encode.pairs);
}

std::vector<std::string> CollectEntityTypes(const std::vector<Document> &docs) {
  std::set<std::string> types;
  for (const Document &d : docs) {
    for (const EntityMention &e : d.entities) types.insert(e.etype);
  }
  return {types.begin(), types.end()};
}

SubwordVocab BuildVocab(const std::vector<Document> &docs) {
  SubwordVocab vocab;
  for (const Document &d : docs) ExtendVocab(d, &vocab);
  // Character pieces so unseen words still segment.
  const std::vector<std::string> words = vocab.tokens();
  for (const std::string &w : words) {
    if (w.size() > 1 && w.front() == '@' && w.back() == '@') continue;
    if (w.front() == '[' && w.back() == ']') continue;
    CharIndex index(w);
    for (int i = 0; i < static_cast<int>(index.size()); ++i) {
      std::string c = index.Slice(w, i, i + 1);
      vocab.Add(c);
      vocab.Add("##" + c);
    }
  }
  return vocab;
}

PreparedCorpus PrepareCorpus(std::vector<Document> docs,
                             const SubwordVocab &vocab,
                             const TriggerLabelSpace &space, bool pre_split,
                             bool special_head) {
  PreparedCorpus out;
  PrepareStats &stats = out.stats;
  TokenizeOptions options;
  options.special_head = special_head;
  for (const Document &doc : docs) {
    ++stats.documents;
    SplitResult split = SplitSentences(doc, pre_split);
    stats.cross_sentence_events += split.dropped_events;
    for (Document &sentence : split.sentences) {
      TokenizedSentence tokens = TokenizeAndMask(sentence, vocab, options);
      if (tokens.size() == 0) continue;
      EncodeResult enc = EncodeLabels(tokens, sentence.events, space);
      ++stats.sentences;
      Add(&stats.encode, enc.stats);
      stats.triggers +=
          static_cast<int>(ExtractTriggerRuns(enc.frame.trigger, space).size());
      for (int i = 0; i < tokens.size(); ++i) {
        stats.argument_labels += ArgLabelIsBegin(enc.frame.theme[i]);
        stats.argument_labels += ArgLabelIsBegin(enc.frame.cause[i]);
      }
      out.sentences.push_back(
          {std::move(sentence), std::move(tokens), std::move(enc.frame)});
    }
  }
  out.documents = std::move(docs);
  return out;
}

json PrepareStatsToJson(const PrepareStats &s) {
  return json{
      {"documents", s.documents},
      {"sentences", s.sentences},
      {"triggers", s.triggers},
      {"argument_labels", s.argument_labels},
      {"pairs", s.encode.pairs},
      {"kept", s.encode.kept},
      {"distance_drops", s.encode.distance_drops},
      {"collision_drops", s.encode.collision_drops},
      {"unaligned_drops", s.encode.unaligned_drops},
      {"trigger_collisions", s.encode.trigger_collisions},
      {"cross_sentence_events", s.cross_sentence_events},
      {"distance_drop_rate", s.distance_drop_rate()},
      {"ignored_lines", s.parse.ignored_lines},
      {"ignored_args", s.parse.ignored_args},
      {"ignored_mentions", s.parse.ignored_mentions},
  };
}

json SentenceToJson(const PreparedSentence &s, const TriggerLabelSpace &space) {
  json trig = json::array(), theme = json::array(), cause = json::array();
  for (int i = 0; i < s.frame.size(); ++i) {
    trig.push_back(space.name(s.frame.trigger[i]));
    theme.push_back(std::string(ArgLabelName(s.frame.theme[i])));
    cause.push_back(std::string(ArgLabelName(s.frame.cause[i])));
  }
  return json{{"doc_id", s.sentence.doc_id},
              {"base_offset", s.sentence.base_offset},
              {"tokens", s.tokens.tokens},
              {"token_ids", s.tokens.token_ids},
              {"trigger", trig},
              {"theme", theme},
              {"cause", cause}};
}

TrainData LoadTrainData(const RunConfig &config) {
  ParseStats parse;
  std::vector<Document> train = ReadCorpusDir(config.train_dir, true, &parse);
  std::vector<Document> dev;
  if (!config.dev_dir.empty()) dev = ReadCorpusDir(config.dev_dir, true);
  SubwordVocab vocab =
      config.vocab.empty() ? BuildVocab(train) : SubwordVocab::Load(config.vocab);
  if (!config.vocab.empty()) {
    for (const std::string &t : CollectEntityTypes(train)) {
      vocab.Add(EntityMaskToken(t));
    }
  }
  auto events = CorpusEventTypes(config.corpus);
  TriggerLabelSpace space({events.begin(), events.end()}, CollectEntityTypes(train));
  PreparedCorpus prepared = PrepareCorpus(std::move(train), vocab, space,
                                          config.pre_split,
                                          config.model.special_head);
  prepared.stats.parse = parse;
  return TrainData{std::move(vocab), std::move(space), std::move(prepared),
                   std::move(dev)};
}

PrepareStats CmdPrepare(const RunConfig &config) {
  CheckRunConfig(config, true);
  TrainData data = LoadTrainData(config);
  const std::string dir = config.output_dir + "/prepared";
  fs::create_directories(dir);
  auto write_jsonl = [&](const std::string &path, const PreparedCorpus &c) {
    std::ostringstream out;
    for (const PreparedSentence &s : c.sentences) {
      out << SentenceToJson(s, data.space).dump() << '\n';
    }
    WriteFile(path, out.str());
  };
  write_jsonl(dir + "/train.jsonl", data.train);
  json report;
  report["train"] = PrepareStatsToJson(data.train.stats);
  if (!data.dev.empty()) {
    PreparedCorpus dev = PrepareCorpus(data.dev, data.vocab, data.space,
                                       config.pre_split,
                                       config.model.special_head);
    write_jsonl(dir + "/dev.jsonl", dev);
    report["dev"] = PrepareStatsToJson(dev.stats);
  }
  data.vocab.Save(dir + "/vocab.txt");
  WriteFile(dir + "/drop_report.json", report.dump(2) + "\n");
  return data.train.stats;
}

EventQuadrupleSet PredictDocument(const nn::Model &model,
                                  const SubwordVocab &vocab, const Document &doc,
                                  bool pre_split, PredictStats *stats) {
  Document bare = doc;
  bare.events.clear();
  TokenizeOptions options;
  options.special_head = model.config().special_head;
  EventQuadrupleSet out;
  for (const Document &sentence : SplitSentences(bare, pre_split).sentences) {
    TokenizedSentence tokens = TokenizeAndMask(sentence, vocab, options);
    if (tokens.size() == 0) continue;
    LabelFrame frame = model.Predict(tokens);
    DecodeResult decoded = DecodeLabels(tokens, frame, model.space());
    AssemblyResult assembled = Assemble(decoded.triggers, decoded.links);
    if (stats != nullptr) Add(stats, decoded.stats, assembled.stats);
    ShiftEvents(sentence.base_offset, &assembled.events);
    const int base = out.size();
    for (Event &ev : assembled.events.events) {
      for (EventArg &a : ev.themes) {
        if (a.kind == EventArg::Kind::kEvent) a.event += base;
      }
      if (ev.cause && ev.cause->kind == EventArg::Kind::kEvent) {
        ev.cause->event += base;
      }
      out.events.push_back(std::move(ev));
    }
  }
  return out;
}

std::vector<ScoredDocument> GoldScoredDocuments(const std::vector<Document> &docs) {
  std::vector<ScoredDocument> out;
  for (const Document &d : docs) {
    out.push_back({d.doc_id, d.text, FromGoldEvents(d)});
  }
  return out;
}

std::vector<ScoredDocument> PredictScoredDocuments(
    const nn::Model &model, const SubwordVocab &vocab,
    const std::vector<Document> &docs, bool pre_split) {
  std::vector<ScoredDocument> out;
  for (const Document &d : docs) {
    out.push_back({d.doc_id, d.text, PredictDocument(model, vocab, d, pre_split)});
  }
  return out;
}

TrainResult TrainSeed(const RunConfig &config, const TrainData &data,
                      uint64_t seed, const std::string &dir,
                      std::ostream *progress) {
  nn::Rng rng(seed);
  auto model = std::make_shared<nn::Model>(config.model, data.space,
                                           data.vocab.size());
  model->Init(&rng);
  nn::Adam adam(model->params(), config.adam);

  const std::vector<Document> &dev_docs =
      data.dev.empty() ? data.train.documents : data.dev;
  const std::vector<ScoredDocument> dev_gold = GoldScoredDocuments(dev_docs);
  auto evaluate = [&]() {
    ScoreReport report = ScoreCorpus(
        PredictScoredDocuments(*model, data.vocab, dev_docs, config.pre_split),
        dev_gold, config.eval_mode);
    return SelectionScore(report, config.selection_metric);
  };

  TrainResult result;
  result.seed = seed;
  std::vector<nn::Matrix> best;
  for (const nn::Param &p : model->params().all()) best.push_back(p.value);
  double best_score = -1.0;

  const std::vector<PreparedSentence> &train = data.train.sentences;
  const int n = static_cast<int>(train.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::ostringstream log;
  log << "epoch\tloss\tdev_" << config.selection_metric << "_f1\n";

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.Below(static_cast<uint64_t>(i) + 1)]);
    }
    double total = 0.0;
    for (int start = 0; start < n; start += config.batch_size) {
      const int end = std::min(n, start + config.batch_size);
      model->params().ZeroGrad();
      for (int k = start; k < end; ++k) {
        const PreparedSentence &s = train[order[k]];
        bool predicted = config.train_use_predicted_triggers > 0.0 &&
                         rng.Uniform() < config.train_use_predicted_triggers;
        nn::ForwardPass pass =
            model->Forward(s.tokens, predicted ? nullptr : &s.frame, &rng);
        double loss = model->Loss(pass, s.frame);
        if (!std::isfinite(loss)) {
          throw Error(ErrorCode::kDivergence,
                      "non-finite loss at epoch " + std::to_string(epoch) +
                          " (seed " + std::to_string(seed) + ")");
        }
        model->Backward(pass, s.frame);
        total += loss;
      }
      model->params().ScaleGrad(1.0 / (end - start));
      adam.Step(&model->params());
    }
    EpochLog entry{epoch, n > 0 ? total / n : 0.0, evaluate()};
    result.log.push_back(entry);
    log << entry.epoch << '\t' << Fixed(entry.loss, 6) << '\t'
        << Fixed(entry.dev_score, 4) << '\n';
    if (progress != nullptr) {
      *progress << "seed " << seed << " epoch " << epoch << " loss "
                << Fixed(entry.loss, 6) << " dev_" << config.selection_metric
                << "_f1 " << Fixed(entry.dev_score, 4) << '\n';
    }
    if (entry.dev_score > best_score) {
      best_score = entry.dev_score;
      result.best_epoch = epoch;
      for (int k = 0; k < model->params().size(); ++k) {
        best[k] = model->params()[k].value;
      }
    }
  }
  for (int k = 0; k < model->params().size(); ++k) {
    model->params()[k].value = best[k];
  }
  result.best_dev_score = std::max(best_score, 0.0);
  if (!dir.empty()) {
    fs::create_directories(dir);
    result.checkpoint = dir + "/model.json";
    nn::SaveCheckpoint(result.checkpoint, *model, data.vocab);
    WriteFile(dir + "/train.log", log.str());
  }
  result.model = std::move(model);
  return result;
}

std::vector<TrainResult> CmdTrain(const RunConfig &config, std::ostream *progress) {
  CheckRunConfig(config, true);
  TrainData data = LoadTrainData(config);
  fs::create_directories(config.output_dir);
  data.vocab.Save(config.output_dir + "/vocab.txt");
  std::vector<TrainResult> results;
  json summary = json::array();
  for (uint64_t seed : config.seeds) {
    results.push_back(
        TrainSeed(config, data, seed, SeedDir(config.output_dir, seed), progress));
    const TrainResult &r = results.back();
    summary.push_back({{"seed", r.seed},
                       {"checkpoint", r.checkpoint},
                       {"best_epoch", r.best_epoch},
                       {"best_dev_score", r.best_dev_score}});
  }
  WriteFile(config.output_dir + "/train_summary.json", summary.dump(2) + "\n");
  return results;
}

int CmdPredict(const std::string &checkpoint, const std::string &input_dir,
               const std::string &output_dir, bool pre_split) {
  nn::Checkpoint ck = nn::LoadCheckpoint(checkpoint);
  std::vector<Document> docs = ReadCorpusDir(input_dir, false);
  for (const Document &d : docs) {
    for (const EntityMention &e : d.entities) {
      try {
        ck.model.space().EntityBegin(e.etype);
      } catch (const Error &) {
        throw Error(ErrorCode::kShapeMismatch,
                    d.doc_id + ": entity type " + e.etype +
                        " unknown to the checkpoint");
      }
    }
  }
  fs::create_directories(output_dir);
  for (const Document &d : docs) {
    EventQuadrupleSet events = PredictDocument(ck.model, ck.vocab, d, pre_split);
    WriteFile(output_dir + "/" + d.doc_id + ".a2", SerializeEvents(d, events));
  }
  return static_cast<int>(docs.size());
}

ScoreOutput CmdScore(const std::vector<std::string> &pred_dirs,
                     const std::string &gold_dir, MatchMode mode) {
  std::vector<Document> gold_docs = ReadCorpusDir(gold_dir, true);
  std::vector<ScoredDocument> golds = GoldScoredDocuments(gold_docs);
  std::set<std::string> gold_ids;
  for (const Document &d : gold_docs) gold_ids.insert(d.doc_id);
  ScoreOutput out;
  for (const std::string &dir : pred_dirs) {
    if (!fs::is_directory(dir)) {
      throw Error(ErrorCode::kIo, "not a directory: " + dir);
    }
    std::set<std::string> pred_ids;
    for (const auto &entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".a2") {
        pred_ids.insert(entry.path().stem().string());
      }
    }
    if (pred_ids != gold_ids) {
      std::string missing;
      for (const std::string &id : gold_ids) {
        if (!pred_ids.count(id)) missing += " -" + id;
      }
      for (const std::string &id : pred_ids) {
        if (!gold_ids.count(id)) missing += " +" + id;
      }
      throw Error(ErrorCode::kDocIdMismatch,
                  dir + ": document ids differ from gold:" + missing);
    }
    std::vector<ScoredDocument> preds;
    for (const Document &g : gold_docs) {
      std::string a2 = ReadFile(dir + "/" + g.doc_id + ".a2");
      Document p = ParseDocument(g.doc_id, g.text, SerializeEntities(g), a2);
      preds.push_back({g.doc_id, g.text, FromGoldEvents(p)});
    }
    ScoreReport report = ScoreCorpus(preds, golds, mode);
    report.checkpoint = dir;
    out.reports.push_back(std::move(report));
  }
  out.summary = SummarizeRuns(out.reports);
  return out;
}

std::vector<AblationRow> CmdAblate(const RunConfig &config, std::ostream *progress) {
  CheckRunConfig(config, true);
  TrainData data = LoadTrainData(config);
  const std::vector<Document> &eval_docs =
      data.dev.empty() ? data.train.documents : data.dev;
  const std::vector<ScoredDocument> golds = GoldScoredDocuments(eval_docs);
  std::vector<AblationRow> rows;
  for (nn::MergeStrategy strategy : config.ablate_strategies) {
    RunConfig c = config;
    c.model.merging.strategy = strategy;
    AblationRow row;
    row.strategy = strategy;
    std::vector<double> trg, arg, eve;
    for (uint64_t seed : config.seeds) {
      const std::string dir = SeedDir(
          config.output_dir + "/ablate/" + std::string(nn::MergeStrategyName(strategy)),
          seed);
      TrainResult r = TrainSeed(c, data, seed, dir, progress);
      ScoreReport report = ScoreCorpus(
          PredictScoredDocuments(*r.model, data.vocab, eval_docs, c.pre_split),
          golds, c.eval_mode);
      report.seed = static_cast<long long>(seed);
      report.checkpoint = r.checkpoint;
      trg.push_back(report.trigger.micro.f1());
      arg.push_back(report.argument.micro.f1());
      eve.push_back(report.event.micro.f1());
      row.reports.push_back(std::move(report));
    }
    row.trigger_f1 = Summarize(trg);
    row.argument_f1 = Summarize(arg);
    row.event_f1 = Summarize(eve);
    rows.push_back(std::move(row));
  }
  fs::create_directories(config.output_dir);
  WriteFile(config.output_dir + "/ablation.txt", FormatAblation(rows));
  return rows;
}

std::string FormatAblation(const std::vector<AblationRow> &rows) {
  auto cell = [](const MeanStd &m) {
    std::string s = Fixed(100.0 * m.mean, 2) + " +- " + Fixed(100.0 * m.stddev, 2);
    return s + std::string(s.size() < 16 ? 16 - s.size() : 1, ' ');
  };
  std::ostringstream out;
  out << std::left << std::setw(16) << "Strategy" << std::setw(16) << "Trg F1"
      << std::setw(16) << "Arg F1" << "Eve F1\n";
  for (const AblationRow &r : rows) {
    out << std::left << std::setw(16) << nn::MergeStrategyName(r.strategy)
        << cell(r.trigger_f1) << cell(r.argument_f1)
        << Fixed(100.0 * r.event_f1.mean, 2) << " +- "
        << Fixed(100.0 * r.event_f1.stddev, 2) << '\n';
  }
  if (!rows.empty()) {
    out << "(" << rows.front().reports.size()
        << " seeds, mean +- sample std, micro F1 x100)\n";
  }
  return out.str();
}

}  // namespace mlsl
