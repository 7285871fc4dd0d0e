//
// Copyright 2026 The coda-augment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef CODA_TEXTKIT_H_
#define CODA_TEXTKIT_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coda {

class Dataset;

struct Token {
  std::string surface;
  size_t offset = 0;  // byte offset into the source text
  bool punctuation = false;

  size_t end() const { return offset + surface.size(); }
};

struct TokenSequence {
  std::string text;
  std::vector<Token> tokens;

  size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  // Tokens that are not standalone punctuation.
  size_t word_count() const;
  // Source text covering tokens [begin, end).
  std::string_view Slice(size_t begin, size_t end) const;
};

// Splits on Unicode whitespace, then peels leading and trailing punctuation
// characters into single-character tokens. Acronym-style trailing periods
// ("U.S.", "e.g.") stay attached.
TokenSequence Tokenize(std::string_view text);

size_t WordCount(std::string_view text);

// True when every code point of `surface` is punctuation.
bool IsPunctuationToken(std::string_view surface);

// ASCII lowercase; bytes outside ASCII are copied unchanged.
std::string CaseFold(std::string_view text);

// Case-folded surfaces of the non-punctuation tokens.
std::vector<std::string> FoldedWords(std::string_view text);

// Bundled English function-word list. Lookup expects case-folded input.
bool IsStopword(std::string_view folded);
std::span<const std::string_view> Stopwords();

struct NGram {
  size_t start = 0;  // token index
  size_t n = 0;
  std::string text;  // source text of the span, original spacing kept

  size_t end() const { return start + n; }
};

// Every contiguous 1..3-gram with no punctuation token and at least one
// non-stopword, ordered by start then arity.
std::vector<NGram> ExtractNGrams(const TokenSequence& seq);

struct SentenceSpan {
  size_t begin = 0;  // token index
  size_t end = 0;    // exclusive
};

// Sentence boundaries fall after standalone '.', '!' or '?' tokens. A
// sequence without terminal punctuation is one sentence.
std::vector<SentenceSpan> SplitSentences(const TokenSequence& seq);
std::vector<std::string> SentenceTexts(std::string_view text);

struct LengthStats {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
};

LengthStats ComputeLengthStats(const Dataset& dataset);
LengthStats ComputeLengthStats(std::span<const size_t> lengths);

// Index of the first token matching `needle` (case-insensitive, on token
// boundaries) at or after `from`, or npos.
size_t FindTokenSequence(std::span<const std::string> haystack_folded,
                         std::span<const std::string> needle_folded,
                         size_t from = 0);

std::vector<std::string> FoldedSurfaces(const TokenSequence& seq);

}  // namespace coda

#endif  // CODA_TEXTKIT_H_
