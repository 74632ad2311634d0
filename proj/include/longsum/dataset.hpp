#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "longsum/common.hpp"
#include "longsum/text.hpp"

namespace longsum {

// One line of the arXiv/PubMed scientific-article JSONL releases.
// section_names and sections are carried through but unused.
struct DatasetRecord {
  std::string article_id;
  std::vector<std::string> article_text;
  std::vector<std::string> abstract_text;
  std::vector<std::string> section_names;
  std::vector<std::vector<std::string>> sections;
};

struct DatasetStats {
  std::size_t num_docs = 0;
  double avg_sentences_per_doc = 0.0;
  double avg_tokens_per_doc = 0.0;
  double avg_tokens_per_sentence = 0.0;
};

namespace detail {

inline std::vector<std::string> string_array(const nlohmann::json& value,
                                             const char* field) {
  if (!value.is_array())
    throw DataError(std::string("field '") + field +
                    "' must be an array of strings");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string())
      throw DataError(std::string("field '") + field +
                      "' must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline DatasetRecord parse_record(const std::string& line) {
  nlohmann::json obj = nlohmann::json::parse(line);
  if (!obj.is_object()) throw DataError("record is not a JSON object");
  for (const char* field : {"article_id", "article_text", "abstract_text"})
    if (!obj.contains(field))
      throw DataError(std::string("missing required field '") + field + "'");
  DatasetRecord rec;
  if (!obj["article_id"].is_string())
    throw DataError("field 'article_id' must be a string");
  rec.article_id = obj["article_id"].get<std::string>();
  if (rec.article_id.empty()) throw DataError("field 'article_id' is empty");
  rec.article_text = string_array(obj["article_text"], "article_text");
  rec.abstract_text = string_array(obj["abstract_text"], "abstract_text");
  if (obj.contains("section_names"))
    rec.section_names = string_array(obj["section_names"], "section_names");
  if (obj.contains("sections")) {
    if (!obj["sections"].is_array())
      throw DataError("field 'sections' must be an array");
    for (const auto& sec : obj["sections"])
      rec.sections.push_back(string_array(sec, "sections"));
  }
  return rec;
}

// The public releases wrap abstract sentences in <S>...</S> boundary tags;
// those are markup, not text.
inline std::string strip_sentence_markers(std::string_view s) {
  std::string_view t = trim_view(s);
  if (t.rfind("<S>", 0) == 0) t.remove_prefix(3);
  if (t.size() >= 4 && t.substr(t.size() - 4) == "</S>")
    t.remove_suffix(4);
  return std::string(trim_view(t));
}

}  // namespace detail

// Streaming line-by-line reader; holds one record at a time so files larger
// than memory can be processed. In strict mode a malformed line aborts with
// its line number; in lenient mode malformed lines are counted and skipped.
class JsonlReader {
 public:
  explicit JsonlReader(std::filesystem::path path, bool strict = false)
      : path_(std::move(path)), in_(path_), strict_(strict) {
    if (!in_) throw DataError("cannot open dataset file: " + path_.string());
  }

  std::optional<DatasetRecord> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (trim_view(line).empty()) continue;  // blank lines are not records
      try {
        return detail::parse_record(line);
      } catch (const std::exception& e) {
        if (strict_)
          throw DataError(path_.string() + " line " + std::to_string(line_) +
                          ": " + e.what());
        ++skipped_;
      }
    }
    if (in_.bad())
      throw DataError("I/O error while reading " + path_.string());
    return std::nullopt;
  }

  std::size_t skipped() const { return skipped_; }
  std::size_t line() const { return line_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  bool strict_;
  std::size_t line_ = 0;
  std::size_t skipped_ = 0;
};

// Converts a record to a Document: article sentences tokenized in order,
// abstract becomes the reference. Whitespace-only entries are dropped.
// take_first_k, when set, keeps only the first k article sentences.
inline Document to_document(const DatasetRecord& record,
                            std::optional<std::size_t> take_first_k = {}) {
  Document doc;
  doc.id = record.article_id;
  std::size_t limit =
      take_first_k ? *take_first_k : record.article_text.size();
  for (const std::string& raw : record.article_text) {
    if (doc.sentences.size() >= limit) break;
    std::string text = detail::strip_sentence_markers(raw);
    if (text.empty()) continue;
    doc.sentences.push_back(make_sentence(doc.sentences.size(), std::move(text)));
  }
  if (doc.sentences.empty())
    throw DataError("record '" + record.article_id +
                    "' has an empty article_text");
  std::vector<Sentence> reference;
  for (const std::string& raw : record.abstract_text) {
    std::string text = detail::strip_sentence_markers(raw);
    if (text.empty()) continue;
    reference.push_back(make_sentence(reference.size(), std::move(text)));
  }
  if (!reference.empty()) doc.reference = std::move(reference);
  return doc;
}

// Single-pass accumulator; merges associatively, so chunks of a corpus can
// be counted independently and combined.
class StatsAccumulator {
 public:
  void add(const DatasetRecord& record) {
    ++docs_;
    for (const std::string& raw : record.article_text) {
      std::string text = detail::strip_sentence_markers(raw);
      if (text.empty()) continue;
      ++sentences_;
      tokens_ += tokenize(text).size();
    }
  }

  void merge(const StatsAccumulator& other) {
    docs_ += other.docs_;
    sentences_ += other.sentences_;
    tokens_ += other.tokens_;
  }

  DatasetStats finish() const {
    if (docs_ == 0)
      throw DataError("dataset statistics require at least one record");
    DatasetStats s;
    s.num_docs = docs_;
    s.avg_sentences_per_doc =
        static_cast<double>(sentences_) / static_cast<double>(docs_);
    s.avg_tokens_per_doc =
        static_cast<double>(tokens_) / static_cast<double>(docs_);
    s.avg_tokens_per_sentence =
        sentences_ == 0 ? 0.0
                        : static_cast<double>(tokens_) /
                              static_cast<double>(sentences_);
    return s;
  }

 private:
  std::size_t docs_ = 0;
  std::size_t sentences_ = 0;
  unsigned long long tokens_ = 0;
};

// Token counts use the library tokenizer with no stopword removal; averages
// are unweighted means over article text only.
inline DatasetStats dataset_stats(JsonlReader& reader) {
  StatsAccumulator acc;
  while (auto record = reader.next()) acc.add(*record);
  return acc.finish();
}

inline DatasetStats dataset_stats(const std::vector<DatasetRecord>& records) {
  StatsAccumulator acc;
  for (const DatasetRecord& r : records) acc.add(r);
  return acc.finish();
}

}  // namespace longsum
