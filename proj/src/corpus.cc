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

#include "coda/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "coda/error.h"
#include "coda/record.h"
#include "coda/rng.h"
#include "coda/utf8.h"
#include "json.hpp"

namespace coda {
namespace {

using nlohmann::json;

[[noreturn]] void ParseFail(std::string_view source, const std::string& where,
                            const std::string& reason) {
  throw Error(ErrorCode::kParseError,
              std::string(source) + ":" + where + ": " + reason);
}

void RequireTask(CorpusFormat format, TaskKind task) {
  if (DefaultFormat(task) != format) {
    throw Error(ErrorCode::kTaskMismatch,
                std::string(CorpusFormatName(format)) +
                    " files cannot hold " + std::string(TaskKindName(task)) +
                    " data");
  }
}

std::string AutoId(size_t ordinal) { return "doc" + std::to_string(ordinal); }

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string text;
  for (const auto& t : tokens) {
    if (!text.empty()) text += ' ';
    text += t;
  }
  return text;
}

Dataset ReadJsonl(std::istream& in, std::string_view source) {
  std::vector<Document> docs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    const json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      ParseFail(source, where, "not a JSON object");
    }
    if (!record.contains("text") || !record["text"].is_string()) {
      ParseFail(source, where, "missing string field \"text\"");
    }
    if (!record.contains("label") || !record["label"].is_string()) {
      ParseFail(source, where, "missing string field \"label\"");
    }
    Document doc;
    if (record.contains("id")) {
      if (!record["id"].is_string()) ParseFail(source, where, "\"id\" must be a string");
      doc.id = record["id"].get<std::string>();
    } else {
      doc.id = AutoId(docs.size());
    }
    doc.text = record["text"].get<std::string>();
    doc.payload = record["label"].get<std::string>();
    docs.push_back(std::move(doc));
  }
  return Dataset(TaskKind::kClassification, std::move(docs));
}

std::vector<std::string> SplitColumns(const std::string& line) {
  std::vector<std::string> cols;
  std::istringstream ss(line);
  std::string col;
  while (ss >> col) cols.push_back(col);
  return cols;
}

Dataset ReadConll(std::istream& in, std::string_view source) {
  std::vector<Document> docs;
  NerPayload current;
  std::optional<size_t> open_start;
  std::string open_type;

  const auto close_span = [&] {
    if (open_start) {
      current.spans.push_back({*open_start, current.tokens.size(), open_type});
      open_start.reset();
    }
  };
  const auto flush = [&] {
    close_span();
    if (current.tokens.empty()) return;
    Document doc;
    doc.id = AutoId(docs.size());
    doc.text = JoinTokens(current.tokens);
    doc.payload = std::move(current);
    docs.push_back(std::move(doc));
    current = NerPayload{};
  };

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cols = SplitColumns(line);
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols.front() == "-DOCSTART-") {
      flush();
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (cols.size() < 2) ParseFail(source, where, "expected token and tag columns");
    const std::string& tag = cols.back();
    if (tag == "O") {
      close_span();
    } else if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') &&
               tag[1] == '-') {
      const std::string type = tag.substr(2);
      if (tag[0] == 'B') {
        close_span();
        open_start = current.tokens.size();
        open_type = type;
      } else if (!open_start || open_type != type) {
        ParseFail(source, where,
                  "tag " + tag + " does not continue a " + type + " span");
      }
    } else {
      ParseFail(source, where, "malformed BIO tag '" + tag + "'");
    }
    current.tokens.push_back(cols.front());
  }
  flush();
  return Dataset(TaskKind::kNer, std::move(docs));
}

Dataset ReadSquad(std::istream& in, std::string_view source) {
  const json root = json::parse(in, nullptr, false);
  if (root.is_discarded() || !root.is_object() || !root.contains("data") ||
      !root["data"].is_array()) {
    ParseFail(source, "root", "expected an object with a \"data\" array");
  }
  std::vector<Document> docs;
  const json& data = root["data"];
  for (size_t i = 0; i < data.size(); ++i) {
    const json& article = data[i];
    const std::string title = article.value("title", "");
    if (!article.contains("paragraphs") || !article["paragraphs"].is_array()) {
      ParseFail(source, "data[" + std::to_string(i) + "]", "missing \"paragraphs\"");
    }
    const json& paragraphs = article["paragraphs"];
    for (size_t j = 0; j < paragraphs.size(); ++j) {
      const std::string pwhere = "data[" + std::to_string(i) + "].paragraphs[" +
                                 std::to_string(j) + "]";
      const json& para = paragraphs[j];
      if (!para.contains("context") || !para["context"].is_string()) {
        ParseFail(source, pwhere, "missing string \"context\"");
      }
      const std::string context = para["context"].get<std::string>();
      const json qas = para.value("qas", json::array());
      for (size_t k = 0; k < qas.size(); ++k) {
        const std::string where = pwhere + ".qas[" + std::to_string(k) + "]";
        const json& qa = qas[k];
        if (!qa.contains("question") || !qa["question"].is_string()) {
          ParseFail(source, where, "missing string \"question\"");
        }
        if (!qa.contains("answers") || !qa["answers"].is_array() ||
            qa["answers"].empty()) {
          ParseFail(source, where, "missing non-empty \"answers\"");
        }
        const json& answer = qa["answers"][0];
        if (!answer.contains("text") || !answer["text"].is_string() ||
            !answer.contains("answer_start") ||
            !answer["answer_start"].is_number_unsigned()) {
          ParseFail(source, where, "answer needs \"text\" and \"answer_start\"");
        }
        QaPayload payload;
        payload.question = qa["question"].get<std::string>();
        payload.answer = answer["text"].get<std::string>();
        payload.title = title;
        const auto start = CodePointToByteOffset(
            context, answer["answer_start"].get<size_t>());
        if (!start || context.compare(*start, payload.answer.size(),
                                      payload.answer) != 0) {
          ParseFail(source, where,
                    "answer_start does not point at the answer text");
        }
        payload.answer_start = *start;
        Document doc;
        doc.id = qa.contains("id") && qa["id"].is_string()
                     ? qa["id"].get<std::string>()
                     : AutoId(docs.size());
        doc.text = context;
        doc.payload = std::move(payload);
        docs.push_back(std::move(doc));
      }
    }
  }
  return Dataset(TaskKind::kQa, std::move(docs));
}

void WriteJsonl(const Dataset& dataset, std::ostream& out) {
  for (const Document& doc : dataset.documents()) {
    json record;
    record["id"] = doc.id;
    record["text"] = doc.text;
    record["label"] = doc.label();
    out << record.dump() << '\n';
  }
}

void WriteConll(const Dataset& dataset, std::ostream& out) {
  bool first = true;
  for (const Document& doc : dataset.documents()) {
    if (!first) out << '\n';
    first = false;
    const NerPayload& ner = doc.ner();
    std::vector<std::string> tags(ner.tokens.size(), "O");
    for (const EntitySpan& span : ner.spans) {
      tags[span.start_token] = "B-" + span.entity_type;
      for (size_t t = span.start_token + 1; t < span.end_token; ++t) {
        tags[t] = "I-" + span.entity_type;
      }
    }
    for (size_t t = 0; t < ner.tokens.size(); ++t) {
      out << ner.tokens[t] << ' ' << tags[t] << '\n';
    }
  }
}

void WriteSquad(const Dataset& dataset, std::ostream& out) {
  json data = json::array();
  const auto docs = dataset.documents();
  for (size_t i = 0; i < docs.size(); ++i) {
    const QaPayload& qa = docs[i].qa();
    if (data.empty() || data.back()["title"] != qa.title) {
      data.push_back({{"title", qa.title}, {"paragraphs", json::array()}});
    }
    json& paragraphs = data.back()["paragraphs"];
    if (paragraphs.empty() || paragraphs.back()["context"] != docs[i].text) {
      paragraphs.push_back({{"context", docs[i].text}, {"qas", json::array()}});
    }
    json answer = {{"text", qa.answer},
                   {"answer_start",
                    ByteToCodePointOffset(docs[i].text, qa.answer_start)}};
    paragraphs.back()["qas"].push_back({{"id", docs[i].id},
                                        {"question", qa.question},
                                        {"answers", json::array({answer})}});
  }
  json root = {{"version", "1.1"}, {"data", std::move(data)}};
  out << root.dump(1) << '\n';
}

}  // namespace

std::string_view TaskKindName(TaskKind task) {
  switch (task) {
    case TaskKind::kClassification: return "classification";
    case TaskKind::kNer: return "ner";
    case TaskKind::kQa: return "qa";
  }
  return "";
}

TaskKind ParseTaskKind(std::string_view name) {
  if (name == "classification") return TaskKind::kClassification;
  if (name == "ner") return TaskKind::kNer;
  if (name == "qa") return TaskKind::kQa;
  throw Error(ErrorCode::kConfigError, "unknown task '" + std::string(name) + "'");
}

std::string_view CorpusFormatName(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kJsonl: return "jsonl";
    case CorpusFormat::kConll: return "conll";
    case CorpusFormat::kSquad: return "squad";
  }
  return "";
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "conll") return CorpusFormat::kConll;
  if (name == "squad") return CorpusFormat::kSquad;
  throw Error(ErrorCode::kConfigError, "unknown format '" + std::string(name) + "'");
}

CorpusFormat DefaultFormat(TaskKind task) {
  switch (task) {
    case TaskKind::kClassification: return CorpusFormat::kJsonl;
    case TaskKind::kNer: return CorpusFormat::kConll;
    case TaskKind::kQa: return CorpusFormat::kSquad;
  }
  return CorpusFormat::kJsonl;
}

std::set<std::string> CollectLabels(TaskKind task,
                                    std::span<const Document> documents) {
  std::set<std::string> labels;
  for (const Document& doc : documents) {
    if (task == TaskKind::kClassification) {
      if (const auto* label = std::get_if<ClassLabel>(&doc.payload)) {
        labels.insert(*label);
      }
    } else if (task == TaskKind::kNer) {
      if (const auto* ner = std::get_if<NerPayload>(&doc.payload)) {
        for (const auto& span : ner->spans) labels.insert(span.entity_type);
      }
    }
  }
  return labels;
}

Dataset::Dataset(TaskKind task, std::vector<Document> documents)
    : task_(task), documents_(std::move(documents)) {
  labels_ = CollectLabels(task_, documents_);
  Validate();
  BuildIndex();
}

Dataset::Dataset(TaskKind task, std::vector<Document> documents,
                 std::set<std::string> label_inventory)
    : task_(task),
      documents_(std::move(documents)),
      labels_(std::move(label_inventory)) {
  Validate();
  BuildIndex();
}

void Dataset::BuildIndex() {
  index_.reserve(documents_.size());
  for (size_t i = 0; i < documents_.size(); ++i) index_.emplace(documents_[i].id, i);
}

void Dataset::Validate() const {
  if (documents_.empty()) {
    throw Error(ErrorCode::kParseError, "dataset has no documents");
  }
  std::unordered_set<std::string_view> ids;
  for (const Document& doc : documents_) {
    if (!ids.insert(doc.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate document id '" + doc.id + "'");
    }
    const auto fail = [&doc](const std::string& reason) {
      throw Error(ErrorCode::kParseError, "document '" + doc.id + "': " + reason);
    };
    switch (task_) {
      case TaskKind::kClassification: {
        const auto* label = std::get_if<ClassLabel>(&doc.payload);
        if (!label) throw Error(ErrorCode::kTaskMismatch, "document '" + doc.id + "' lacks a class label");
        if (!labels_.contains(*label)) fail("label '" + *label + "' not in inventory");
        break;
      }
      case TaskKind::kNer: {
        const auto* ner = std::get_if<NerPayload>(&doc.payload);
        if (!ner) throw Error(ErrorCode::kTaskMismatch, "document '" + doc.id + "' lacks entity spans");
        size_t prev_end = 0;
        auto spans = ner->spans;
        std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
          return a.start_token < b.start_token;
        });
        for (const EntitySpan& span : spans) {
          if (span.start_token >= span.end_token || span.end_token > ner->tokens.size()) {
            fail("entity span out of token bounds");
          }
          if (span.start_token < prev_end) fail("overlapping entity spans");
          if (!labels_.contains(span.entity_type)) {
            fail("entity type '" + span.entity_type + "' not in inventory");
          }
          prev_end = span.end_token;
        }
        break;
      }
      case TaskKind::kQa: {
        const auto* qa = std::get_if<QaPayload>(&doc.payload);
        if (!qa) throw Error(ErrorCode::kTaskMismatch, "document '" + doc.id + "' lacks a QA triple");
        if (qa->answer_start > doc.text.size() ||
            doc.text.compare(qa->answer_start, qa->answer.size(), qa->answer) != 0) {
          fail("answer not found at its stored offset");
        }
        break;
      }
    }
  }
}

std::optional<size_t> Dataset::Find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Dataset ReadDataset(std::istream& in, CorpusFormat format, TaskKind task,
                    std::string_view source_name) {
  RequireTask(format, task);
  switch (format) {
    case CorpusFormat::kJsonl: return ReadJsonl(in, source_name);
    case CorpusFormat::kConll: return ReadConll(in, source_name);
    case CorpusFormat::kSquad: return ReadSquad(in, source_name);
  }
  throw Error(ErrorCode::kConfigError, "unsupported format");
}

Dataset LoadDataset(const std::filesystem::path& path, CorpusFormat format,
                    TaskKind task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ReadDataset(in, format, task, path.string());
}

void WriteDataset(const Dataset& dataset, CorpusFormat format,
                  std::ostream& out) {
  RequireTask(format, dataset.task());
  switch (format) {
    case CorpusFormat::kJsonl: WriteJsonl(dataset, out); break;
    case CorpusFormat::kConll: WriteConll(dataset, out); break;
    case CorpusFormat::kSquad: WriteSquad(dataset, out); break;
  }
}

void SaveDataset(const Dataset& dataset, CorpusFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  WriteDataset(dataset, format, out);
}

Dataset SampleLowResource(const Dataset& dataset, size_t n, uint64_t seed) {
  if (n > dataset.size()) {
    throw Error(ErrorCode::kInsufficientData,
                "cannot sample " + std::to_string(n) + " of " +
                    std::to_string(dataset.size()) + " documents");
  }
  Rng rng(seed);
  std::vector<size_t> chosen;
  if (dataset.task() == TaskKind::kClassification &&
      n >= dataset.label_inventory().size()) {
    std::map<std::string, std::vector<size_t>> by_label;
    for (size_t i = 0; i < dataset.size(); ++i) {
      by_label[dataset[i].label()].push_back(i);
    }
    std::vector<bool> taken(dataset.size(), false);
    for (const auto& [label, members] : by_label) {
      const size_t pick = members[UniformIndex(rng, members.size())];
      taken[pick] = true;
      chosen.push_back(pick);
    }
    std::vector<size_t> rest;
    for (size_t i = 0; i < dataset.size(); ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    for (size_t r : SampleWithoutReplacement(rng, rest.size(), n - chosen.size())) {
      chosen.push_back(rest[r]);
    }
  } else {
    chosen = SampleWithoutReplacement(rng, dataset.size(), n);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Document> docs;
  docs.reserve(n);
  for (size_t i : chosen) docs.push_back(dataset[i]);
  return Dataset(dataset.task(), std::move(docs), dataset.label_inventory());
}

Dataset MergeAugmentations(const Dataset& dataset,
                           std::span<const AugmentationRecord> records) {
  std::vector<Document> docs(dataset.documents().begin(),
                             dataset.documents().end());
  for (const AugmentationRecord& record : records) {
    if (!record.accepted) continue;
    if (!record.payload) {
      throw Error(ErrorCode::kPayloadInvalid,
                  "accepted record " + record.AugmentedId() +
                      " has no reconstructed payload");
    }
    Document doc;
    doc.id = record.AugmentedId();
    doc.text = record.generation;
    doc.payload = *record.payload;
    docs.push_back(std::move(doc));
  }
  try {
    return Dataset(dataset.task(), std::move(docs), dataset.label_inventory());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDuplicateId) throw;
    throw Error(ErrorCode::kPayloadInvalid, e.what());
  }
}

std::optional<size_t> CodePointToByteOffset(std::string_view text,
                                            size_t code_points) {
  size_t pos = 0;
  for (size_t i = 0; i < code_points; ++i) {
    if (pos >= text.size()) return std::nullopt;
    pos += DecodeUtf8(text, pos).length;
  }
  return pos;
}

size_t ByteToCodePointOffset(std::string_view text, size_t bytes) {
  size_t count = 0;
  for (size_t pos = 0; pos < bytes && pos < text.size();) {
    pos += DecodeUtf8(text, pos).length;
    ++count;
  }
  return count;
}

}  // namespace coda
