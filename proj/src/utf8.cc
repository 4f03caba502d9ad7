#include "mlsl/utf8.h"

namespace mlsl {

CharIndex::CharIndex(std::string_view text) {
  size_t i = 0;
  while (i < text.size()) {
    byte_offsets_.push_back(i);
    unsigned char lead = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    char32_t cp = lead;
    if (lead >= 0xF0) {
      len = 4;
      cp = lead & 0x07;
    } else if (lead >= 0xE0) {
      len = 3;
      cp = lead & 0x0F;
    } else if (lead >= 0xC0) {
      len = 2;
      cp = lead & 0x1F;
    }
    if (i + len > text.size()) {
      len = text.size() - i;
      cp = 0xFFFD;
    } else {
      for (size_t k = 1; k < len; ++k) {
        unsigned char cont = static_cast<unsigned char>(text[i + k]);
        if ((cont & 0xC0) != 0x80) {
          len = k;
          cp = 0xFFFD;
          break;
        }
        cp = (cp << 6) | (cont & 0x3F);
      }
    }
    chars_.push_back(cp);
    i += len;
  }
  byte_offsets_.push_back(text.size());
}

std::string CharIndex::Slice(std::string_view text, size_t start,
                             size_t end) const {
  size_t b = byte_offsets_[start];
  size_t e = byte_offsets_[end];
  return std::string(text.substr(b, e - b));
}

bool IsSpaceChar(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0xA0;
}

bool IsPunctChar(char32_t c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) ||
         (c >= 91 && c <= 96) || (c >= 123 && c <= 126);
}

std::vector<WordToken> SplitWords(std::string_view text, int begin, int end) {
  CharIndex index(text);
  return SplitWords(text, index, begin, end);
}

std::vector<WordToken> SplitWords(std::string_view text,
                                  const CharIndex &index, int begin, int end) {
  if (end < 0) end = static_cast<int>(index.size());
  std::vector<WordToken> words;
  int word_start = -1;
  auto flush = [&](int at) {
    if (word_start >= 0) {
      words.push_back({index.Slice(text, word_start, at), word_start, at});
      word_start = -1;
    }
  };
  for (int i = begin; i < end; ++i) {
    char32_t c = index.at(i);
    if (IsSpaceChar(c)) {
      flush(i);
    } else if (IsPunctChar(c)) {
      flush(i);
      words.push_back({index.Slice(text, i, i + 1), i, i + 1});
    } else if (word_start < 0) {
      word_start = i;
    }
  }
  flush(end);
  return words;
}

}  // namespace mlsl
