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

#include "coda/pos_tagger.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "coda/error.h"
#include "json.hpp"

namespace coda {
namespace {

constexpr std::array<std::string_view, 17> kUposNames = {
    "ADJ",  "ADP",  "ADV",  "AUX",  "CCONJ", "DET",   "INTJ",  "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
};

const std::unordered_map<std::string_view, Upos>& Lexicon() {
  static const auto* lexicon = [] {
    auto* m = new std::unordered_map<std::string_view, Upos>();
    const auto add = [m](Upos tag, std::initializer_list<std::string_view> ws) {
      for (auto w : ws) m->emplace(w, tag);
    };
    add(Upos::kDet, {"the", "a", "an", "this", "these", "those", "any",
                     "some", "every", "each", "no", "all", "both", "either",
                     "neither", "another", "such", "whatever", "what"});
    add(Upos::kPron,
        {"i", "me", "my", "mine", "myself", "you", "your", "yours",
         "yourself", "yourselves", "he", "him", "his", "himself", "she",
         "her", "hers", "herself", "it", "its", "itself", "we", "us", "our",
         "ours", "ourselves", "they", "them", "their", "theirs",
         "themselves", "who", "whom", "whose", "which", "something",
         "anything", "nothing", "everything", "someone", "anyone",
         "everyone", "nobody", "somebody", "anybody", "everybody"});
    add(Upos::kAux, {"am", "is", "are", "was", "were", "be", "been", "being",
                     "have", "has", "had", "having", "do", "does", "did",
                     "will", "would", "shall", "should", "can", "could",
                     "may", "might", "must"});
    add(Upos::kAdp,
        {"of", "in", "on", "at", "by", "for", "with", "without", "from",
         "to", "into", "onto", "over", "under", "about", "above", "below",
         "between", "among", "through", "during", "before", "after",
         "against", "across", "along", "around", "behind", "beyond", "near",
         "since", "toward", "towards", "upon", "within", "via", "per",
         "despite", "except", "throughout", "amid"});
    add(Upos::kCconj, {"and", "or", "but", "nor"});
    add(Upos::kSconj, {"if", "because", "although", "though", "whereas",
                       "unless", "whether", "that", "while", "until"});
    add(Upos::kPart, {"not", "n't"});
    add(Upos::kAdv,
        {"very", "too", "also", "just", "only", "never", "always", "often",
         "here", "there", "now", "then", "however", "still", "even",
         "again", "already", "almost", "soon", "quite", "rather", "perhaps",
         "yet", "so", "up", "down", "out", "off", "away", "back", "more",
         "most", "less", "least", "how", "when", "where", "why"});
    add(Upos::kNum, {"one", "two", "three", "four", "five", "six", "seven",
                     "eight", "nine", "ten", "eleven", "twelve", "twenty",
                     "hundred", "thousand", "million", "billion"});
    add(Upos::kIntj, {"oh", "wow", "hello", "hi", "yes", "ok", "okay"});
    return m;
  }();
  return *lexicon;
}

const std::unordered_set<std::string_view>& Verbs() {
  static const auto* verbs = new std::unordered_set<std::string_view>{
      "accept", "access", "add", "advertise", "agree", "allow", "announce",
      "appear", "approve", "ask", "become", "begin", "believe", "bring",
      "build", "buy", "call", "change", "claim", "collect", "come",
      "confirm", "consider", "continue", "create", "cut", "decide",
      "delete", "die", "disclose", "expect", "fall", "feel", "find",
      "follow", "get", "give", "go", "grant", "grow", "happen", "hear",
      "help", "hire", "hold", "include", "keep", "kill", "know", "launch",
      "lead", "learn", "leave", "let", "like", "limit", "live", "look",
      "lose", "love", "make", "meet", "modify", "move", "need", "notify",
      "offer", "open", "pass", "pay", "play", "process", "provide",
      "publish", "pull", "raise", "reach", "read", "receive", "release",
      "remember", "remove", "report", "require", "reserve", "run", "say",
      "see", "seem", "sell", "send", "serve", "set", "share", "show",
      "sign", "sit", "speak", "spend", "stand", "stay", "stop", "store",
      "sue", "suspend", "take", "talk", "tell", "terminate", "think",
      "try", "turn", "understand", "update", "use", "wait", "walk", "want",
      "watch", "win", "work", "write"};
  return *verbs;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsInflectedVerb(std::string_view w) {
  const auto& verbs = Verbs();
  if (verbs.contains(w)) return true;
  const auto strip = [&](std::string_view suffix, std::string_view add) {
    if (!EndsWith(w, suffix)) return false;
    std::string base(w.substr(0, w.size() - suffix.size()));
    base += add;
    return verbs.contains(base);
  };
  return strip("s", "") || strip("es", "") || strip("ed", "") ||
         strip("d", "") || strip("ing", "") || strip("ing", "e") ||
         strip("ied", "y") || strip("ies", "y");
}

std::optional<Upos> SuffixTag(std::string_view w) {
  if (EndsWith(w, "ly")) return Upos::kAdv;
  if (EndsWith(w, "ing") || EndsWith(w, "ed")) return Upos::kVerb;
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "al", "ic",
                             "less", "ish", "ary"}) {
    if (EndsWith(w, s)) return Upos::kAdj;
  }
  for (std::string_view s : {"tion", "sion", "ment", "ness", "ity", "ance",
                             "ence", "ism", "ist"}) {
    if (EndsWith(w, s)) return Upos::kNoun;
  }
  return std::nullopt;
}

bool IsNumber(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != ',' && c != '.' && c != '-' && c != '/') {
      return false;
    }
  }
  return digit;
}

bool IsSymbol(std::string_view s) {
  return s.size() == 1 && std::string_view("$%&+=<>@#*^~|\\").find(s[0]) !=
                              std::string_view::npos;
}

bool StartsUpper(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool IsSentenceEnd(std::string_view s) {
  return s == "." || s == "!" || s == "?";
}

}  // namespace

std::string_view UposName(Upos tag) {
  return kUposNames[static_cast<size_t>(tag)];
}

std::optional<Upos> ParseUpos(std::string_view name) {
  for (size_t i = 0; i < kUposNames.size(); ++i) {
    if (kUposNames[i] == name) return static_cast<Upos>(i);
  }
  return std::nullopt;
}

std::string FormatPosSequence(const PosSequence& tags) {
  std::string out;
  for (Upos tag : tags) {
    if (!out.empty()) out += ' ';
    out += UposName(tag);
  }
  return out;
}

PosSequence ParsePosSequence(std::string_view text) {
  PosSequence tags;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    if (end > pos) {
      const auto tag = ParseUpos(text.substr(pos, end - pos));
      if (!tag) {
        throw Error(ErrorCode::kParseError,
                    "unknown UPOS tag '" +
                        std::string(text.substr(pos, end - pos)) + "'");
      }
      tags.push_back(*tag);
    }
    pos = end;
  }
  return tags;
}

std::optional<Upos> RuleBasedPosTagger::LexiconTag(std::string_view folded) {
  const auto& lexicon = Lexicon();
  const auto it = lexicon.find(folded);
  if (it == lexicon.end()) return std::nullopt;
  return it->second;
}

bool RuleBasedPosTagger::IsKnownVerb(std::string_view folded) {
  return IsInflectedVerb(folded);
}

PosSequence RuleBasedPosTagger::Tag(const TokenSequence& seq, size_t begin,
                                    size_t end) const {
  PosSequence tags;
  tags.reserve(end - begin);
  for (size_t i = begin; i < end; ++i) {
    const std::string& surface = seq.tokens[i].surface;
    const std::string folded = CaseFold(surface);
    const bool initial = i == begin || IsSentenceEnd(seq.tokens[i - 1].surface);
    const std::optional<Upos> prev =
        tags.empty() ? std::nullopt : std::optional<Upos>(tags.back());

    Upos tag = Upos::kNoun;
    if (seq.tokens[i].punctuation) {
      tag = IsSymbol(surface) ? Upos::kSym : Upos::kPunct;
    } else if (IsNumber(surface)) {
      tag = Upos::kNum;
    } else if (folded == "to") {
      // Infinitival "to" before a bare verb, otherwise a preposition.
      const bool next_is_verb =
          i + 1 < end && !StartsUpper(seq.tokens[i + 1].surface) &&
          Verbs().contains(CaseFold(seq.tokens[i + 1].surface));
      tag = next_is_verb ? Upos::kPart : Upos::kAdp;
    } else if (auto lex = LexiconTag(folded);
               lex && (!StartsUpper(surface) || initial ||
                       surface.size() == 1)) {
      tag = *lex;
    } else if (StartsUpper(surface)) {
      tag = Upos::kPropn;
    } else if (prev == Upos::kPart && i > begin &&
               CaseFold(seq.tokens[i - 1].surface) == "to") {
      tag = Upos::kVerb;
    } else if (IsInflectedVerb(folded) && prev != Upos::kDet &&
               prev != Upos::kAdj) {
      tag = Upos::kVerb;
    } else if (auto suffix = SuffixTag(folded)) {
      tag = *suffix;
      if (tag == Upos::kVerb && prev == Upos::kDet) tag = Upos::kNoun;
    }
    tags.push_back(tag);
  }
  return tags;
}

HttpPosTagger::HttpPosTagger(std::string base_url, HttpOptions options)
    : base_url_(std::move(base_url)), options_(std::move(options)) {}

PosSequence HttpPosTagger::Tag(const TokenSequence& seq, size_t begin,
                               size_t end) const {
  nlohmann::json body;
  body["tokens"] = nlohmann::json::array();
  for (size_t i = begin; i < end; ++i) {
    body["tokens"].push_back(seq.tokens[i].surface);
  }
  const HttpReply reply = PostJson(base_url_, "/tag", body, options_);
  if (reply.status != 200) {
    throw Error(ErrorCode::kBackendUnavailable,
                "tag returned HTTP " + std::to_string(reply.status) + ": " +
                    ErrorMessage(reply));
  }
  const nlohmann::json parsed = nlohmann::json::parse(reply.body, nullptr, false);
  if (!parsed.is_object() || !parsed.contains("tags") ||
      !parsed["tags"].is_array() || parsed["tags"].size() != end - begin) {
    throw Error(ErrorCode::kBackendUnavailable,
                "tag response must hold one tag per token");
  }
  PosSequence tags;
  for (const auto& t : parsed["tags"]) {
    const auto tag = t.is_string() ? ParseUpos(t.get<std::string>())
                                   : std::nullopt;
    if (!tag) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "tag response holds a non-UPOS tag");
    }
    tags.push_back(*tag);
  }
  return tags;
}

}  // namespace coda
