#ifndef MLSL_UTF8_H_
#define MLSL_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mlsl {

// Maps code point offsets (the unit of standoff annotations) to byte offsets
// into a UTF-8 string.
class CharIndex {
 public:
  explicit CharIndex(std::string_view text);

  // Number of code points.
  size_t size() const { return byte_offsets_.size() - 1; }

  size_t byte_offset(size_t char_offset) const {
    return byte_offsets_[char_offset];
  }

  // Code point at `char_offset` (U+FFFD for invalid sequences).
  char32_t at(size_t char_offset) const { return chars_[char_offset]; }

  std::string Slice(std::string_view text, size_t start, size_t end) const;

 private:
  std::vector<size_t> byte_offsets_;
  std::vector<char32_t> chars_;
};

bool IsSpaceChar(char32_t c);
// ASCII punctuation and symbols; non-ASCII characters are treated as word
// characters.
bool IsPunctChar(char32_t c);

struct WordToken {
  std::string text;
  int start = 0;  // code point offsets, end exclusive
  int end = 0;
};

// Whitespace/punctuation word segmentation of text[begin, end) (code points;
// end < 0 means the whole text). Each punctuation character is its own word.
std::vector<WordToken> SplitWords(std::string_view text, int begin = 0,
                                  int end = -1);
std::vector<WordToken> SplitWords(std::string_view text,
                                  const CharIndex &index, int begin, int end);

}  // namespace mlsl

#endif  // MLSL_UTF8_H_
