#include "mlsl/vocab.h"

#include <fstream>

#include "mlsl/error.h"
#include "mlsl/utf8.h"

namespace mlsl {
namespace {

constexpr size_t kMaxWordChars = 100;

}  // namespace

SubwordVocab::SubwordVocab() {
  Add(kPad);
  Add(kUnk);
  Add(kHead);
}

SubwordVocab::SubwordVocab(const std::vector<std::string> &tokens)
    : SubwordVocab() {
  for (const std::string &t : tokens) Add(t);
}

SubwordVocab SubwordVocab::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open vocabulary " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) tokens.push_back(line);
  }
  return SubwordVocab(tokens);
}

void SubwordVocab::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write vocabulary " + path);
  for (const std::string &t : tokens_) out << t << '\n';
}

int SubwordVocab::Add(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  int id = size();
  tokens_.emplace_back(token);
  index_.emplace(std::string(token), id);
  return id;
}

bool SubwordVocab::Contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

int SubwordVocab::Id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  return index_.at(std::string(kUnk));
}

std::vector<std::string> SubwordVocab::Segment(std::string_view word) const {
  CharIndex chars(word);
  size_t n = chars.size();
  if (n == 0) return {};
  if (n > kMaxWordChars) return {std::string(kUnk)};
  std::vector<std::string> pieces;
  size_t start = 0;
  while (start < n) {
    size_t end = n;
    std::string found;
    while (end > start) {
      std::string piece = chars.Slice(word, start, end);
      if (start > 0) piece = "##" + piece;
      if (Contains(piece)) {
        found = std::move(piece);
        break;
      }
      --end;
    }
    if (found.empty()) return {std::string(kUnk)};
    pieces.push_back(std::move(found));
    start = end;
  }
  return pieces;
}

uint64_t SubwordVocab::Hash() const {
  uint64_t h = 14695981039346656037ull;
  for (const std::string &t : tokens_) {
    for (unsigned char c : t) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x0A;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace mlsl
