#ifndef MLSL_NN_CHECKPOINT_H_
#define MLSL_NN_CHECKPOINT_H_

#include <string>

#include "mlsl/nn/model.h"
#include "mlsl/vocab.h"
#include "json.hpp"

namespace mlsl::nn {

struct Checkpoint {
  Model model;
  SubwordVocab vocab;
};

// Self-describing JSON: config, label space, vocabulary and its hash, and
// every parameter tensor by name.
nlohmann::json CheckpointToJson(const Model &model, const SubwordVocab &vocab);
// Throws kShapeMismatch when tensors disagree with the stored config or the
// vocabulary hash does not match.
Checkpoint CheckpointFromJson(const nlohmann::json &j);

void SaveCheckpoint(const std::string &path, const Model &model,
                    const SubwordVocab &vocab);
Checkpoint LoadCheckpoint(const std::string &path);

// Copies parameter values; shapes must agree.
void CopyParams(const ParamStore &from, ParamStore *to);

}  // namespace mlsl::nn

#endif  // MLSL_NN_CHECKPOINT_H_
