// mlsl: prepare / train / predict / score / ablate / generate.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlsl/error.h"
#include "mlsl/pipeline.h"
#include "mlsl/synthetic.h"

namespace {

using mlsl::Error;
using mlsl::ErrorCode;

std::vector<uint64_t> ParseSeeds(const std::string &list) {
  std::vector<uint64_t> seeds;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      if (!item.empty()) seeds.push_back(std::stoull(item));
    } catch (const std::exception &) {
      throw Error(ErrorCode::kUsage, "bad seed: " + item);
    }
  }
  return seeds;
}

struct Overrides {
  std::string config;
  std::string output_dir;
  std::string seeds;
  std::string strategy;
  int epochs = -1;

  mlsl::RunConfig Load() const {
    mlsl::RunConfig c = mlsl::LoadRunConfig(config);
    if (!output_dir.empty()) c.output_dir = output_dir;
    if (!seeds.empty()) c.seeds = ParseSeeds(seeds);
    if (!strategy.empty()) {
      auto s = mlsl::nn::ParseMergeStrategy(strategy);
      if (!s) throw Error(ErrorCode::kUsage, "unknown merging strategy: " + strategy);
      c.model.merging.strategy = *s;
    }
    if (epochs >= 0) c.epochs = epochs;
    return c;
  }
};

void AddRunFlags(CLI::App *cmd, Overrides *o) {
  cmd->add_option("-c,--config", o->config, "key: value run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--output-dir", o->output_dir, "overrides output_dir");
  cmd->add_option("--seeds", o->seeds, "comma separated seed list");
  cmd->add_option("--epochs", o->epochs, "overrides epochs");
}

int ExitCode(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return 1;
    case ErrorCode::kDivergence: return 3;
    default: return 2;
  }
}

std::string OneLine(std::string s) {
  for (char &c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Joint biomedical event extraction by multi-layer sequence labeling"};
  app.require_subcommand(1);

  Overrides prepare_o, train_o, ablate_o;
  CLI::App *prepare = app.add_subcommand("prepare", "encode a standoff corpus into label frames");
  AddRunFlags(prepare, &prepare_o);

  CLI::App *train = app.add_subcommand("train", "train one model per seed");
  AddRunFlags(train, &train_o);
  train->add_option("--strategy", train_o.strategy, "none|average|attention|self_attention");

  std::string checkpoint, input_dir, predict_out;
  bool pre_split = false;
  CLI::App *predict = app.add_subcommand("predict", "write .a2 predictions");
  predict->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  predict->add_option("--input", input_dir, "directory of .txt/.a1 files")
      ->required()
      ->check(CLI::ExistingDirectory);
  predict->add_option("--output", predict_out)->required();
  predict->add_flag("--pre-split", pre_split, "one sentence per line");

  std::vector<std::string> pred_dirs;
  std::string gold_dir, mode_name = "approximate_recursive", score_json;
  CLI::App *score = app.add_subcommand("score", "score predictions against gold");
  score->add_option("--pred", pred_dirs, "prediction directory (repeat for runs)")
      ->required();
  score->add_option("--gold", gold_dir)->required()->check(CLI::ExistingDirectory);
  score->add_option("--mode", mode_name, "strict|approximate_recursive");
  score->add_option("--json", score_json, "write the report as JSON");

  std::string strategies;
  CLI::App *ablate = app.add_subcommand("ablate", "compare merging strategies over seeds");
  AddRunFlags(ablate, &ablate_o);
  ablate->add_option("--strategies", strategies, "comma separated strategy list");

  std::string kind = "mixed", gen_out;
  int count = 8, far = 1;
  uint64_t gen_seed = 1;
  CLI::App *generate = app.add_subcommand("generate", "write a synthetic standoff corpus");
  generate->add_option("--kind", kind, "mixed|separability|distance|nested")
      ->check(CLI::IsMember({"mixed", "separability", "distance", "nested"}));
  generate->add_option("--output", gen_out)->required();
  generate->add_option("--count", count, "documents (pairs for distance)");
  generate->add_option("--far", far, "distance: far arguments");
  generate->add_option("--seed", gen_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: Usage: " << OneLine(e.what()) << "\n";
    return 1;
  }

  try {
    if (prepare->parsed()) {
      mlsl::PrepareStats s = mlsl::CmdPrepare(prepare_o.Load());
      std::cout << mlsl::PrepareStatsToJson(s).dump(2) << "\n";
    } else if (train->parsed()) {
      for (const mlsl::TrainResult &r : mlsl::CmdTrain(train_o.Load(), &std::cerr)) {
        std::cout << "seed " << r.seed << " best_epoch " << r.best_epoch
                  << " dev_f1 " << r.best_dev_score << " " << r.checkpoint << "\n";
      }
    } else if (predict->parsed()) {
      int n = mlsl::CmdPredict(checkpoint, input_dir, predict_out, pre_split);
      std::cout << "wrote " << n << " prediction files to " << predict_out << "\n";
    } else if (score->parsed()) {
      auto mode = mlsl::ParseMatchMode(mode_name);
      if (!mode) throw Error(ErrorCode::kUsage, "unknown mode: " + mode_name);
      mlsl::ScoreOutput out = mlsl::CmdScore(pred_dirs, gold_dir, *mode);
      if (out.reports.size() == 1) {
        std::cout << mlsl::FormatReport(out.reports.front());
      } else {
        std::cout << mlsl::FormatRunSummary(out.summary);
      }
      if (!score_json.empty()) {
        nlohmann::json j;
        j["reports"] = nlohmann::json::array();
        for (const mlsl::ScoreReport &r : out.reports) {
          j["reports"].push_back(mlsl::ReportToJson(r));
        }
        j["summary"] = mlsl::RunSummaryToJson(out.summary);
        mlsl::WriteFile(score_json, j.dump(2) + "\n");
      }
    } else if (ablate->parsed()) {
      mlsl::RunConfig c = ablate_o.Load();
      if (!strategies.empty()) {
        c.ablate_strategies.clear();
        std::stringstream ss(strategies);
        std::string item;
        while (std::getline(ss, item, ',')) {
          auto s = mlsl::nn::ParseMergeStrategy(item);
          if (!s) throw Error(ErrorCode::kUsage, "unknown merging strategy: " + item);
          c.ablate_strategies.push_back(*s);
        }
      }
      std::cout << mlsl::FormatAblation(mlsl::CmdAblate(c, &std::cerr));
    } else if (generate->parsed()) {
      std::vector<mlsl::Document> docs;
      if (kind == "mixed") {
        docs = mlsl::synthetic::MixedCorpus(count, gen_seed);
      } else if (kind == "separability") {
        docs = mlsl::synthetic::SeparabilityCorpus(count, gen_seed);
      } else if (kind == "distance") {
        docs = mlsl::synthetic::DistanceCorpus(count, far);
      } else {
        docs = {mlsl::synthetic::NestedExampleDocument()};
      }
      mlsl::synthetic::WriteCorpus(gen_out, docs);
      std::cout << "wrote " << docs.size() << " documents to " << gen_out << "\n";
    }
  } catch (const Error &e) {
    std::cerr << "error: " << mlsl::ErrorCodeName(e.code()) << ": "
              << OneLine(e.what()) << "\n";
    return ExitCode(e.code());
  } catch (const std::exception &e) {
    std::cerr << "error: Io: " << OneLine(e.what()) << "\n";
    return 2;
  }
  return 0;
}
