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

#include "qsent/text.h"

#include <array>
#include <unordered_set>

namespace qsent {
namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Length of the UTF-8 sequence introduced by lead byte c.
size_t Utf8Length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xE) return 3;
  if ((c >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte
}

enum class Special { kNone, kOpenQuote, kApostrophe, kCloseQuote, kEllipsis,
                     kArrow, kDash };

// Classifies the multi-byte punctuation the review corpus actually uses.
Special ClassifyMultibyte(std::string_view s) {
  if (s == "\xE2\x80\x9C") return Special::kOpenQuote;   // “
  if (s == "\xE2\x80\x9D") return Special::kCloseQuote;  // ”
  if (s == "\xE2\x80\x98") return Special::kOpenQuote;   // ‘
  if (s == "\xE2\x80\x99") return Special::kApostrophe;  // ’
  if (s == "\xE2\x80\xA6") return Special::kEllipsis;    // …
  if (s == "\xE2\x86\x92") return Special::kArrow;       // →
  if (s == "\xE2\x80\x93" || s == "\xE2\x80\x94") return Special::kDash;
  return Special::kNone;
}

bool IsWordByte(std::string_view text, size_t i) {
  const char c = text[i];
  if (IsAsciiAlpha(c) || IsDigit(c)) return true;
  const auto u = static_cast<unsigned char>(c);
  if (u < 0x80) return false;
  size_t len = std::min(Utf8Length(u), text.size() - i);
  return ClassifyMultibyte(text.substr(i, len)) == Special::kNone;
}

bool IsWordStart(std::string_view text, size_t i) {
  const char c = text[i];
  if (IsAsciiAlpha(c)) return true;
  return static_cast<unsigned char>(c) >= 0x80 && IsWordByte(text, i);
}

size_t ApostropheLength(std::string_view text, size_t i) {
  if (text[i] == '\'') return 1;
  if (text.substr(i, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

size_t CountDigits(std::string_view text, size_t i) {
  size_t n = 0;
  while (i + n < text.size() && IsDigit(text[i + n])) ++n;
  return n;
}

// Returns the end of the number starting at i (text[i] is a digit).
size_t ScanNumber(std::string_view text, size_t i) {
  size_t lead = CountDigits(text, i);
  size_t j = i + lead;
  // Clock time: H:MM or HH:MM.
  if (lead <= 2 && j < text.size() && text[j] == ':' &&
      CountDigits(text, j + 1) == 2) {
    return j + 3;
  }
  // Thousands groups.
  while (j < text.size() && text[j] == ',' &&
         CountDigits(text, j + 1) == 3) {
    j += 4;
  }
  if (j + 1 < text.size() && text[j] == '.' && IsDigit(text[j + 1])) {
    j += 1 + CountDigits(text, j + 1);
  }
  return j;
}

bool IsTerminalRun(const Token &t) {
  if (t.kind != TokenKind::kPunct || t.text.empty()) return false;
  for (char c : t.text) {
    if (c != '.' && c != '!' && c != '?') return false;
  }
  return true;
}

bool IsClosing(const Token &t) {
  return t.kind == TokenKind::kPunct &&
         (t.text == ")" || t.text == "]" || t.text == "\"" ||
          t.text == "'" || t.text == "\xE2\x80\x9D" ||
          t.text == "\xE2\x80\x99");
}

const std::unordered_set<std::string> &Abbreviations() {
  static const auto *kAbbrev = new std::unordered_set<std::string>{
      "dr",   "drs",  "mr",  "mrs",   "ms",  "approx", "pts", "pt",
      "vs",   "etc",  "no",  "trig",  "chol", "trigl", "tot", "wks",
      "mos",  "hrs",  "mins", "st",   "jr",  "appt",   "avg", "tab",
      "tabs", "esp",  "lbs"};
  return *kAbbrev;
}

bool GapHasNewline(std::string_view text, size_t from, size_t to) {
  for (size_t i = from; i < to; ++i) {
    if (text[i] == '\n') return true;
  }
  return false;
}

}  // namespace

const char *TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "Word";
    case TokenKind::kNumber: return "Number";
    case TokenKind::kPunct: return "Punct";
    case TokenKind::kSymbol: return "Symbol";
  }
  return "?";
}

std::string FoldCase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c == '\xE2' && i + 2 < text.size() && text[i + 1] == '\x80' &&
               (text[i + 2] == '\x99' || text[i + 2] == '\x98')) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

bool Token::Is(std::string_view word) const {
  return FoldCase(text) == FoldCase(word);
}

bool IsNumericText(std::string_view text) {
  if (text.empty() || !IsDigit(text[0])) return false;
  return ScanNumber(text, 0) == text.size();
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  auto emit = [&](size_t begin, size_t end, TokenKind kind) {
    tokens.push_back(
        Token{std::string(text.substr(begin, end - begin)), {begin, end}, kind});
  };

  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    if (IsDigit(c)) {
      size_t end = ScanNumber(text, i);
      emit(i, end, TokenKind::kNumber);
      i = end;
      continue;
    }
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80) {
      size_t len = std::min(Utf8Length(u), text.size() - i);
      Special special = ClassifyMultibyte(text.substr(i, len));
      switch (special) {
        case Special::kNone: break;
        case Special::kArrow:
        case Special::kDash:
          emit(i, i + len, TokenKind::kSymbol);
          i += len;
          continue;
        default:
          emit(i, i + len, TokenKind::kPunct);
          i += len;
          continue;
      }
    }
    if (IsWordStart(text, i)) {
      size_t j = i;
      while (j < text.size()) {
        if (IsWordByte(text, j)) {
          j += std::min(Utf8Length(static_cast<unsigned char>(text[j])),
                        text.size() - j);
          continue;
        }
        // Contractions and possessives stay inside the word: "HDL's".
        size_t apos = ApostropheLength(text, j);
        if (apos > 0 && j + apos < text.size() &&
            IsAsciiAlpha(text[j + apos])) {
          j += apos;
          continue;
        }
        break;
      }
      emit(i, j, TokenKind::kWord);
      i = j;
      continue;
    }
    if (c == '\'') {
      emit(i, i + 1, TokenKind::kPunct);
      ++i;
      continue;
    }
    if (c == '.' || c == '!' || c == '?') {
      size_t j = i;
      while (j < text.size() && (text[j] == '.' || text[j] == '!' ||
                                 text[j] == '?')) {
        ++j;
      }
      emit(i, j, TokenKind::kPunct);
      i = j;
      continue;
    }
    static constexpr std::array<std::string_view, 4> kArrows = {"-->", "==>",
                                                                "->", "=>"};
    bool arrow = false;
    for (std::string_view a : kArrows) {
      if (text.substr(i, a.size()) == a) {
        emit(i, i + a.size(), TokenKind::kSymbol);
        i += a.size();
        arrow = true;
        break;
      }
    }
    if (arrow) continue;
    switch (c) {
      case ',': case ';': case ':': case '(': case ')': case '[': case ']':
      case '{': case '}': case '"':
        emit(i, i + 1, TokenKind::kPunct);
        break;
      default:
        emit(i, i + 1, TokenKind::kSymbol);
        break;
    }
    ++i;
  }
  return tokens;
}

std::vector<Sentence> SplitSentences(std::string_view text,
                                     std::string_view review_id) {
  std::vector<Token> tokens = Tokenize(text);
  std::vector<Sentence> sentences;

  auto close = [&](size_t first, size_t last) {
    Sentence s;
    s.span = {tokens[first].span.begin, tokens[last].span.end};
    s.text = std::string(text.substr(s.span.begin, s.span.size()));
    s.tokens.assign(tokens.begin() + static_cast<long>(first),
                    tokens.begin() + static_cast<long>(last) + 1);
    s.review_id = std::string(review_id);
    s.index = static_cast<int>(sentences.size());
    sentences.push_back(std::move(s));
  };

  size_t start = 0;
  for (size_t k = 0; k < tokens.size(); ++k) {
    const Token &tok = tokens[k];
    bool boundary = false;
    size_t last = k;
    if (IsTerminalRun(tok)) {
      bool protected_dot = false;
      if (tok.text == "." && k > start) {
        const Token &prev = tokens[k - 1];
        if (prev.kind == TokenKind::kWord && prev.span.end == tok.span.begin) {
          if (Abbreviations().count(FoldCase(prev.text)) > 0) {
            protected_dot = true;
          }
          // Initialisms such as "e.g." and "i.e.".
          if (prev.text.size() == 1 && k >= start + 2 &&
              tokens[k - 2].text == "." &&
              tokens[k - 2].span.end == prev.span.begin) {
            protected_dot = true;
          }
        }
      }
      while (last + 1 < tokens.size() && IsClosing(tokens[last + 1]) &&
             tokens[last + 1].span.begin == tokens[last].span.end) {
        ++last;
      }
      bool at_end = last + 1 == tokens.size();
      bool spaced = !at_end &&
                    tokens[last + 1].span.begin > tokens[last].span.end;
      boundary = !protected_dot && (at_end || spaced);
      if (!boundary) last = k;
    }
    if (!boundary && k + 1 < tokens.size() &&
        GapHasNewline(text, tok.span.end, tokens[k + 1].span.begin)) {
      boundary = true;
      last = k;
    }
    if (boundary || last + 1 == tokens.size()) {
      close(start, last);
      start = last + 1;
      k = last;
    }
  }
  return sentences;
}

}  // namespace qsent
