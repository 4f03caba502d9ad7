#ifndef MLSL_NN_ENCODER_H_
#define MLSL_NN_ENCODER_H_

#include <span>
#include <vector>

#include "mlsl/nn/params.h"
#include "mlsl/nn/tensor.h"

namespace mlsl::nn {

// Maps a token id sequence to an n x d hidden matrix.
class TokenEncoder {
 public:
  virtual ~TokenEncoder() = default;

  virtual int hidden_size() const = 0;
  virtual int max_length() const = 0;
  // Deterministic (no dropout). Throws kSequenceTooLong.
  virtual Matrix Encode(std::span<const int> token_ids) const = 0;
};

struct EncoderCache {
  std::vector<int> ids;
  Matrix x;         // embeddings after dropout
  Matrix mixed;     // tanh output before layer dropout
  Matrix emb_mask;  // inverted dropout masks; empty when disabled
  Matrix out_mask;
};

// Token + position embeddings (sinusoidal at init, trainable) followed by one
// tanh layer mixing each token with its two neighbours:
//   h_i = tanh(x_i Ws + x_{i-1} Wp + x_{i+1} Wn + b)
class ToyEncoder : public TokenEncoder {
 public:
  // Registers its tensors in `store`, which must outlive the encoder.
  ToyEncoder(ParamStore *store, int vocab_size, int hidden, int max_length);

  int hidden_size() const override { return hidden_; }
  int max_length() const override { return max_length_; }
  Matrix Encode(std::span<const int> token_ids) const override;

  void Init(Rng *rng);

  Matrix Forward(std::span<const int> token_ids, double dropout,
                 double layer_dropout, Rng *rng, EncoderCache *cache) const;
  // Accumulates parameter gradients.
  void Backward(const EncoderCache &cache, const Matrix &d_hidden);

 private:
  ParamStore *store_;
  int hidden_;
  int max_length_;
  int tok_emb_, pos_emb_, w_self_, w_prev_, w_next_, bias_;
};

// Inverted dropout mask of the given shape; entries are 0 or 1/(1-p).
Matrix DropoutMask(int rows, int cols, double p, Rng *rng);

// Uniform(-a, a) with a = sqrt(6 / (rows + cols)).
void XavierInit(Matrix *m, Rng *rng);
void NormalInit(Matrix *m, double stddev, Rng *rng);

}  // namespace mlsl::nn

#endif  // MLSL_NN_ENCODER_H_
