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

#include "coda/textkit.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "coda/corpus.h"
#include "coda/utf8.h"

namespace coda {
namespace {

bool IsUnicodeSpace(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool IsPunctuation(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB:
    case 0xBF: case 0x3001: case 0x3002: case 0x3003:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E);
  }
}

// "U.S." style: two or more letter-period pairs.
bool IsAcronym(std::string_view s) {
  if (s.size() < 4 || s.size() % 2 != 0) return false;
  for (size_t i = 0; i < s.size(); i += 2) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (!std::isalpha(c) || s[i + 1] != '.') return false;
  }
  return true;
}

bool IsApostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

// Contraction and possessive tails: "'s", "'re", "'ll", "'ve", "'d", "'m",
// "'t" as written by CoNLL-style tokenizers.
bool IsClitic(std::string_view rest) {
  std::string folded(rest);
  for (char& c : folded) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return folded == "s" || folded == "re" || folded == "ll" || folded == "ve" ||
         folded == "d" || folded == "m" || folded == "t";
}

size_t StripTrailingPunctuation(std::string_view text, size_t begin, size_t end) {
  while (end > begin) {
    const size_t last = PreviousUtf8Start(text, begin, end);
    if (!IsPunctuation(DecodeUtf8(text, last).code_point)) break;
    end = last;
  }
  return end;
}

void PushWord(std::string_view text, size_t begin, size_t end,
              std::vector<Token>& out) {
  // Peel leading punctuation.
  std::vector<Token> trailing;
  while (begin < end) {
    const Utf8Char ch = DecodeUtf8(text, begin);
    if (!IsPunctuation(ch.code_point)) break;
    if (IsApostrophe(ch.code_point)) {
      const size_t core_end = StripTrailingPunctuation(text, begin + ch.length, end);
      if (core_end > begin + ch.length &&
          IsClitic(text.substr(begin + ch.length, core_end - begin - ch.length))) {
        break;
      }
    }
    out.push_back({std::string(text.substr(begin, ch.length)), begin, true});
    begin += ch.length;
  }
  while (end > begin) {
    const size_t last = PreviousUtf8Start(text, begin, end);
    const Utf8Char ch = DecodeUtf8(text, last);
    if (!IsPunctuation(ch.code_point)) break;
    if (text[last] == '.' && IsAcronym(text.substr(begin, end - begin))) break;
    trailing.push_back({std::string(text.substr(last, ch.length)), last, true});
    end = last;
  }
  if (end > begin) {
    const std::string_view core = text.substr(begin, end - begin);
    out.push_back({std::string(core), begin, IsPunctuationToken(core)});
  }
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

constexpr std::string_view kStopwords[] = {
    "'s",      "a",        "about",   "above",   "after",    "again",   "against",
    "all",      "am",      "an",      "and",      "any",     "are",
    "as",       "at",      "be",      "because",  "been",    "before",
    "being",    "below",   "between", "both",     "but",     "by",
    "can",      "could",   "did",     "do",       "does",    "doing",
    "down",     "during",  "each",    "few",      "for",     "from",
    "further",  "had",     "has",     "have",     "having",  "he",
    "her",      "here",    "hers",    "herself",  "him",     "himself",
    "his",      "how",     "i",       "if",       "in",      "into",
    "is",       "it",      "its",     "itself",   "just",    "me",
    "might",    "more",    "most",    "must",     "my",      "myself",
    "no",       "nor",     "not",     "now",      "of",      "off",
    "on",       "once",    "only",    "or",       "other",   "our",
    "ours",     "ourselves", "out",   "over",     "own",     "same",
    "shall",    "she",     "should",  "so",       "some",    "such",
    "than",     "that",    "the",     "their",    "theirs",  "them",
    "themselves", "then",  "there",   "these",    "they",    "this",
    "those",    "through", "to",      "too",      "under",   "until",
    "up",       "upon",    "very",    "was",      "we",      "were",
    "what",     "when",    "where",   "which",    "while",   "who",
    "whom",     "why",     "will",    "with",     "would",   "you",
    "your",     "yours",   "yourself", "yourselves",
};

}  // namespace

size_t TokenSequence::word_count() const {
  return static_cast<size_t>(std::count_if(
      tokens.begin(), tokens.end(),
      [](const Token& t) { return !t.punctuation; }));
}

std::string_view TokenSequence::Slice(size_t begin, size_t end) const {
  if (begin >= end || end > tokens.size()) return {};
  const size_t from = tokens[begin].offset;
  return std::string_view(text).substr(from, tokens[end - 1].end() - from);
}

TokenSequence Tokenize(std::string_view text) {
  TokenSequence seq;
  seq.text = std::string(text);
  size_t pos = 0;
  size_t word_begin = std::string_view::npos;
  while (pos < text.size()) {
    const Utf8Char ch = DecodeUtf8(text, pos);
    if (IsUnicodeSpace(ch.code_point)) {
      if (word_begin != std::string_view::npos) {
        PushWord(text, word_begin, pos, seq.tokens);
        word_begin = std::string_view::npos;
      }
    } else if (word_begin == std::string_view::npos) {
      word_begin = pos;
    }
    pos += ch.length;
  }
  if (word_begin != std::string_view::npos) {
    PushWord(text, word_begin, text.size(), seq.tokens);
  }
  return seq;
}

size_t WordCount(std::string_view text) { return Tokenize(text).word_count(); }

bool IsPunctuationToken(std::string_view surface) {
  if (surface.empty()) return false;
  for (size_t pos = 0; pos < surface.size();) {
    const Utf8Char ch = DecodeUtf8(surface, pos);
    if (!IsPunctuation(ch.code_point)) return false;
    pos += ch.length;
  }
  return true;
}

std::string CaseFold(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> FoldedWords(std::string_view text) {
  std::vector<std::string> words;
  for (const Token& t : Tokenize(text).tokens) {
    if (!t.punctuation) words.push_back(CaseFold(t.surface));
  }
  return words;
}

std::vector<std::string> FoldedSurfaces(const TokenSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.tokens.size());
  for (const Token& t : seq.tokens) out.push_back(CaseFold(t.surface));
  return out;
}

bool IsStopword(std::string_view folded) {
  return std::binary_search(std::begin(kStopwords), std::end(kStopwords),
                            folded);
}

std::span<const std::string_view> Stopwords() { return kStopwords; }

std::vector<NGram> ExtractNGrams(const TokenSequence& seq) {
  std::vector<NGram> grams;
  const size_t count = seq.tokens.size();
  for (size_t start = 0; start < count; ++start) {
    bool all_stop = true;
    for (size_t n = 1; n <= 3 && start + n <= count; ++n) {
      const Token& last = seq.tokens[start + n - 1];
      if (last.punctuation) break;
      all_stop = all_stop && IsStopword(CaseFold(last.surface));
      if (all_stop) continue;
      grams.push_back({start, n, std::string(seq.Slice(start, start + n))});
    }
  }
  return grams;
}

std::vector<SentenceSpan> SplitSentences(const TokenSequence& seq) {
  std::vector<SentenceSpan> sentences;
  size_t begin = 0;
  for (size_t i = 0; i < seq.tokens.size(); ++i) {
    const std::string& s = seq.tokens[i].surface;
    const bool terminal = s == "." || s == "!" || s == "?";
    if (!terminal) continue;
    // Runs such as "?!" or "..." close a single sentence.
    while (i + 1 < seq.tokens.size()) {
      const std::string& next = seq.tokens[i + 1].surface;
      if (next != "." && next != "!" && next != "?") break;
      ++i;
    }
    sentences.push_back({begin, i + 1});
    begin = i + 1;
  }
  if (begin < seq.tokens.size()) sentences.push_back({begin, seq.tokens.size()});
  return sentences;
}

std::vector<std::string> SentenceTexts(std::string_view text) {
  const TokenSequence seq = Tokenize(text);
  std::vector<std::string> out;
  for (const SentenceSpan& s : SplitSentences(seq)) {
    out.emplace_back(seq.Slice(s.begin, s.end));
  }
  return out;
}

LengthStats ComputeLengthStats(std::span<const size_t> lengths) {
  LengthStats stats;
  if (lengths.empty()) return stats;
  double sum = 0.0;
  for (size_t len : lengths) sum += static_cast<double>(len);
  stats.mean = sum / static_cast<double>(lengths.size());
  double sq = 0.0;
  for (size_t len : lengths) {
    const double d = static_cast<double>(len) - stats.mean;
    sq += d * d;
  }
  stats.sd = std::sqrt(sq / static_cast<double>(lengths.size()));
  return stats;
}

LengthStats ComputeLengthStats(const Dataset& dataset) {
  std::vector<size_t> lengths;
  lengths.reserve(dataset.size());
  for (const Document& doc : dataset.documents()) {
    lengths.push_back(WordCount(doc.text));
  }
  return ComputeLengthStats(lengths);
}

size_t FindTokenSequence(std::span<const std::string> haystack_folded,
                         std::span<const std::string> needle_folded,
                         size_t from) {
  if (needle_folded.empty() || needle_folded.size() > haystack_folded.size()) {
    return std::string::npos;
  }
  for (size_t i = from; i + needle_folded.size() <= haystack_folded.size();
       ++i) {
    if (std::equal(needle_folded.begin(), needle_folded.end(),
                   haystack_folded.begin() + static_cast<std::ptrdiff_t>(i))) {
      return i;
    }
  }
  return std::string::npos;
}

}  // namespace coda
