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

#ifndef CODA_CORPUS_H_
#define CODA_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace coda {

struct AugmentationRecord;

enum class TaskKind { kClassification, kNer, kQa };

enum class CorpusFormat { kJsonl, kConll, kSquad };

std::string_view TaskKindName(TaskKind task);
TaskKind ParseTaskKind(std::string_view name);
std::string_view CorpusFormatName(CorpusFormat format);
CorpusFormat ParseCorpusFormat(std::string_view name);

// Token span over a document's own token list, end exclusive.
struct EntitySpan {
  size_t start_token = 0;
  size_t end_token = 0;
  std::string entity_type;

  bool operator==(const EntitySpan&) const = default;
};

struct NerPayload {
  std::vector<std::string> tokens;
  std::vector<EntitySpan> spans;

  bool operator==(const NerPayload&) const = default;
};

// answer_start is a byte offset into the document text. Files use the
// SQuAD convention of code point offsets and are converted on load/write.
struct QaPayload {
  std::string question;
  std::string answer;
  size_t answer_start = 0;
  std::string title;

  bool operator==(const QaPayload&) const = default;
};

using ClassLabel = std::string;
using Payload = std::variant<ClassLabel, NerPayload, QaPayload>;

struct Document {
  std::string id;
  std::string text;
  Payload payload;

  bool operator==(const Document&) const = default;

  const ClassLabel& label() const { return std::get<ClassLabel>(payload); }
  const NerPayload& ner() const { return std::get<NerPayload>(payload); }
  const QaPayload& qa() const { return std::get<QaPayload>(payload); }
};

// Immutable after construction. The constructor establishes every invariant
// (non-empty, unique ids, payload shape matches the task, labels drawn from
// the inventory, span and answer bounds) and throws kParseError otherwise.
class Dataset {
 public:
  Dataset(TaskKind task, std::vector<Document> documents);
  Dataset(TaskKind task, std::vector<Document> documents,
          std::set<std::string> label_inventory);

  TaskKind task() const { return task_; }
  std::span<const Document> documents() const { return documents_; }
  const std::set<std::string>& label_inventory() const { return labels_; }
  size_t size() const { return documents_.size(); }
  const Document& operator[](size_t i) const { return documents_[i]; }

  // Index of the document with this id, if any.
  std::optional<size_t> Find(std::string_view id) const;

 private:
  void Validate() const;
  void BuildIndex();

  TaskKind task_;
  std::vector<Document> documents_;
  std::set<std::string> labels_;
  std::unordered_map<std::string, size_t> index_;
};

// Label set implied by the documents' payloads.
std::set<std::string> CollectLabels(TaskKind task,
                                    std::span<const Document> documents);

Dataset ReadDataset(std::istream& in, CorpusFormat format, TaskKind task,
                    std::string_view source_name = "<stream>");
Dataset LoadDataset(const std::filesystem::path& path, CorpusFormat format,
                    TaskKind task);

void WriteDataset(const Dataset& dataset, CorpusFormat format,
                  std::ostream& out);
void SaveDataset(const Dataset& dataset, CorpusFormat format,
                 const std::filesystem::path& path);

// Format the task is serialized in by default.
CorpusFormat DefaultFormat(TaskKind task);

// Seeded subsample of exactly n documents in original order. Classification
// splits reserve one document per label when n covers the label inventory.
Dataset SampleLowResource(const Dataset& dataset, size_t n, uint64_t seed);

// Gold documents followed by every accepted record, in record order.
Dataset MergeAugmentations(const Dataset& dataset,
                           std::span<const AugmentationRecord> records);

// Code point <-> byte offset conversion for UTF-8 text.
std::optional<size_t> CodePointToByteOffset(std::string_view text,
                                            size_t code_points);
size_t ByteToCodePointOffset(std::string_view text, size_t bytes);

}  // namespace coda

#endif  // CODA_CORPUS_H_
