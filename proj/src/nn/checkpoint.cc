#include "mlsl/nn/checkpoint.h"

#include "mlsl/error.h"
#include "mlsl/standoff.h"

namespace mlsl::nn {

using nlohmann::json;

namespace {

json MatrixToJson(const Matrix &m) {
  std::vector<double> data(m.size());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) data[r * m.cols() + c] = m(r, c);
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

[[noreturn]] void Bad(const std::string &msg) {
  throw Error(ErrorCode::kShapeMismatch, "checkpoint: " + msg);
}

}  // namespace

json CheckpointToJson(const Model &model, const SubwordVocab &vocab) {
  const ModelConfig &c = model.config();
  json j;
  j["format"] = "mlsl-checkpoint-1";
  j["config"] = {
      {"hidden", c.hidden},
      {"max_length", c.max_length},
      {"strategy", std::string(MergeStrategyName(c.merging.strategy))},
      {"heads", c.merging.heads},
      {"head_size", c.merging.head_size},
      {"dropout", c.dropout},
      {"layer_dropout", c.layer_dropout},
      {"special_head", c.special_head},
  };
  json events = json::array();
  for (EventType t : model.space().event_types()) {
    events.push_back(std::string(EventTypeAbbrev(t)));
  }
  j["event_types"] = events;
  j["entity_types"] = model.space().entity_types();
  j["vocab"] = vocab.tokens();
  j["vocab_hash"] = vocab.Hash();
  json params = json::object();
  for (const Param &p : model.params().all()) params[p.name] = MatrixToJson(p.value);
  j["params"] = params;
  return j;
}

Checkpoint CheckpointFromJson(const json &j) {
  try {
    const json &cj = j.at("config");
    ModelConfig config;
    config.hidden = cj.at("hidden").get<int>();
    config.max_length = cj.at("max_length").get<int>();
    auto strategy = ParseMergeStrategy(cj.at("strategy").get<std::string>());
    if (!strategy) Bad("unknown merging strategy");
    config.merging.strategy = *strategy;
    config.merging.heads = cj.at("heads").get<int>();
    config.merging.head_size = cj.at("head_size").get<int>();
    config.dropout = cj.at("dropout").get<double>();
    config.layer_dropout = cj.at("layer_dropout").get<double>();
    config.special_head = cj.at("special_head").get<bool>();

    std::vector<EventType> events;
    for (const json &e : j.at("event_types")) {
      auto t = ParseEventType(e.get<std::string>());
      if (!t) Bad("unknown event type " + e.get<std::string>());
      events.push_back(*t);
    }
    TriggerLabelSpace space(events,
                            j.at("entity_types").get<std::vector<std::string>>());
    SubwordVocab vocab(j.at("vocab").get<std::vector<std::string>>());
    if (vocab.Hash() != j.at("vocab_hash").get<uint64_t>()) {
      Bad("vocabulary hash mismatch");
    }
    Model model(config, std::move(space), vocab.size());
    const json &pj = j.at("params");
    if (pj.size() != static_cast<size_t>(model.params().size())) {
      Bad("expected " + std::to_string(model.params().size()) +
          " tensors, found " + std::to_string(pj.size()));
    }
    for (Param &p : model.params().all()) {
      if (!pj.contains(p.name)) Bad("missing tensor " + p.name);
      const json &t = pj.at(p.name);
      const int rows = t.at("rows").get<int>();
      const int cols = t.at("cols").get<int>();
      const auto data = t.at("data").get<std::vector<double>>();
      if (rows != p.value.rows() || cols != p.value.cols() ||
          data.size() != static_cast<size_t>(rows) * cols) {
        Bad(p.name + " is " + std::to_string(rows) + "x" + std::to_string(cols) +
            ", expected " + std::to_string(p.value.rows()) + "x" +
            std::to_string(p.value.cols()));
      }
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) p.value(r, c) = data[r * cols + c];
      }
    }
    return Checkpoint{std::move(model), std::move(vocab)};
  } catch (const json::exception &e) {
    Bad(e.what());
  }
}

void SaveCheckpoint(const std::string &path, const Model &model,
                    const SubwordVocab &vocab) {
  WriteFile(path, CheckpointToJson(model, vocab).dump() + "\n");
}

Checkpoint LoadCheckpoint(const std::string &path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kShapeMismatch, path + ": " + e.what());
  }
  return CheckpointFromJson(j);
}

void CopyParams(const ParamStore &from, ParamStore *to) {
  if (from.size() != to->size()) Bad("parameter count differs");
  for (int k = 0; k < from.size(); ++k) {
    if (from[k].value.rows() != (*to)[k].value.rows() ||
        from[k].value.cols() != (*to)[k].value.cols()) {
      Bad(from[k].name + " shape differs");
    }
    (*to)[k].value = from[k].value;
  }
}

}  // namespace mlsl::nn
