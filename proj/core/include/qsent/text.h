// Copyright 2026 The qsent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSENT_TEXT_H_
#define QSENT_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qsent {

// Half-open byte range [begin, end) into a source string.
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool Contains(const Span &other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool operator==(const Span &) const = default;
};

enum class TokenKind { kWord, kNumber, kPunct, kSymbol };

const char *TokenKindName(TokenKind kind);

struct Token {
  std::string text;
  Span span;
  TokenKind kind = TokenKind::kWord;

  bool Is(std::string_view word) const;  // case-insensitive text match
  bool operator==(const Token &) const = default;
};

struct Sentence {
  std::string text;
  Span span;
  std::vector<Token> tokens;
  std::string review_id;
  int index = 0;
};

// Tokenizes UTF-8 text. Whitespace is dropped; every other byte belongs to
// exactly one token. Numbers cover plain integers, decimals ("4.1"),
// thousands groups ("1,000") and clock times ("9:30"). Arrow notations
// ("-->", "->", "=>", "==>", "→") are single symbol tokens.
std::vector<Token> Tokenize(std::string_view text);

// Splits text into sentences. Terminal marks (. ! ?) end a sentence when
// followed by whitespace or end of input; newlines are hard boundaries.
// Dots inside decimals and after known abbreviations never split.
std::vector<Sentence> SplitSentences(std::string_view text,
                                     std::string_view review_id);

// True if text matches the numeric grammar used by the tokenizer.
bool IsNumericText(std::string_view text);

// ASCII lower-casing; curly apostrophes fold to '\''.
std::string FoldCase(std::string_view text);

}  // namespace qsent

#endif  // QSENT_TEXT_H_
