#ifndef MLSL_VOCAB_H_
#define MLSL_VOCAB_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlsl {

// WordPiece-style subword vocabulary. Continuation pieces carry a "##" prefix.
class SubwordVocab {
 public:
  static constexpr std::string_view kPad = "[PAD]";
  static constexpr std::string_view kUnk = "[UNK]";
  static constexpr std::string_view kHead = "[CLS]";

  // Vocabulary holding only the special tokens.
  SubwordVocab();
  explicit SubwordVocab(const std::vector<std::string> &tokens);

  // One token per line, as in BERT vocab.txt files.
  static SubwordVocab Load(const std::string &path);
  void Save(const std::string &path) const;

  int Add(std::string_view token);
  bool Contains(std::string_view token) const;
  // Id of `token`, or the [UNK] id.
  int Id(std::string_view token) const;
  const std::string &token(int id) const { return tokens_[id]; }
  int size() const { return static_cast<int>(tokens_.size()); }
  int unk_id() const { return Id(kUnk); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  // Greedy longest-match-first segmentation of one pre-tokenized word. Returns
  // {"[UNK]"} when the word cannot be covered.
  std::vector<std::string> Segment(std::string_view word) const;

  // FNV-1a over the token list; stored in checkpoints to catch mismatched
  // vocabularies.
  uint64_t Hash() const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace mlsl

#endif  // MLSL_VOCAB_H_
