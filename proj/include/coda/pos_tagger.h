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

#ifndef CODA_POS_TAGGER_H_
#define CODA_POS_TAGGER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coda/http_util.h"
#include "coda/textkit.h"

namespace coda {

// Universal POS inventory.
enum class Upos {
  kAdj, kAdp, kAdv, kAux, kCconj, kDet, kIntj, kNoun, kNum,
  kPart, kPron, kPropn, kPunct, kSconj, kSym, kVerb, kX,
};

std::string_view UposName(Upos tag);
std::optional<Upos> ParseUpos(std::string_view name);

using PosSequence = std::vector<Upos>;

// Space-joined tag names, e.g. "PROPN VERB PUNCT".
std::string FormatPosSequence(const PosSequence& tags);
PosSequence ParsePosSequence(std::string_view text);

class PosTagger {
 public:
  virtual ~PosTagger() = default;

  // Tags tokens [begin, end) of `seq`; one tag per token.
  virtual PosSequence Tag(const TokenSequence& seq, size_t begin,
                          size_t end) const = 0;

  PosSequence Tag(const TokenSequence& seq) const {
    return Tag(seq, 0, seq.size());
  }
};

// Closed-class lexicon, a short list of frequent verbs, capitalization and
// suffix rules, defaulting to NOUN. Deterministic and reentrant.
class RuleBasedPosTagger : public PosTagger {
 public:
  using PosTagger::Tag;
  PosSequence Tag(const TokenSequence& seq, size_t begin,
                  size_t end) const override;

  // Tag the lexicon assigns to a case-folded word, if any.
  static std::optional<Upos> LexiconTag(std::string_view folded);
  static bool IsKnownVerb(std::string_view folded);
};

// POST {base_url}/tag {"tokens": [...]} -> {"tags": [...]}.
class HttpPosTagger : public PosTagger {
 public:
  HttpPosTagger(std::string base_url, HttpOptions options);

  using PosTagger::Tag;
  PosSequence Tag(const TokenSequence& seq, size_t begin,
                  size_t end) const override;

 private:
  std::string base_url_;
  HttpOptions options_;
};

}  // namespace coda

#endif  // CODA_POS_TAGGER_H_
