// Copyright 2026 The tokfit Authors
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

// Run directories: the on-disk contract between a trainer and the toolkit.
//
//   manifest.json      run_id, seed, epochs_logged, early_stop_epoch,
//                      vocab_size, n_valid_sentences, has_discrepancy,
//                      vocab_sha256 (SHA-256 of vocab.tsv bytes)
//   vocab.tsv          token_id  surface  train_count
//   occurrences.tsv    sentence_id  position  token_id  pos_tag
//                      sentence_length  discrepancy (NA when absent)
//   epoch_<E>.tsv      sentence_id  position  loss  correct
//
// Tables are tab-separated with a header row, LF line endings and no
// trailing whitespace. Losses and discrepancies carry exactly six decimals,
// so write_run(load_run(d)) reproduces d byte for byte.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"
#include "tokfit/curves.hpp"
#include "tokfit/error.hpp"
#include "tokfit/grouping.hpp"
#include "tokfit/window.hpp"

namespace tokfit {

namespace fs = std::filesystem;

struct RunManifest {
  std::string run_id;
  std::int64_t seed = 0;
  std::vector<std::int64_t> epochs_logged;
  std::int64_t early_stop_epoch = 0;
  std::int64_t vocab_size = 0;
  std::int64_t n_valid_sentences = 0;
  bool has_discrepancy = false;
  std::string vocab_sha256;

  bool operator==(const RunManifest&) const = default;

  /// 1-based position of early_stop_epoch in epochs_logged, 0 if absent.
  [[nodiscard]] std::size_t early_stop_index() const {
    auto it = std::find(epochs_logged.begin(), epochs_logged.end(), early_stop_epoch);
    return it == epochs_logged.end() ? 0 : static_cast<std::size_t>(it - epochs_logged.begin()) + 1;
  }

  [[nodiscard]] CheckpointWindow window() const {
    return CheckpointWindow(epochs_logged, early_stop_index());
  }
};

struct RunData {
  RunManifest manifest;
  std::vector<TokenMeta> vocab;
  std::vector<OccurrenceMeta> occurrences;
  std::vector<EpochRecords> records;  // one per manifest.epochs_logged entry, same order

  bool operator==(const RunData&) const = default;
};

inline constexpr std::string_view kVocabHeader = "token_id\tsurface\ttrain_count";
inline constexpr std::string_view kOccurrencesHeader =
    "sentence_id\tposition\ttoken_id\tpos_tag\tsentence_length\tdiscrepancy";
inline constexpr std::string_view kEpochHeader = "sentence_id\tposition\tloss\tcorrect";

inline std::string epoch_file_name(std::int64_t epoch) {
  return "epoch_" + std::to_string(epoch) + ".tsv";
}

// ---------------------------------------------------------------------------
// Text helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

inline std::string fixed6(double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(path.string() + ": write failed");
}

/// One parsed TSV table: data rows as field lists, with 1-based line numbers.
struct Table {
  std::string path;
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> line_numbers;
  std::unique_ptr<const std::string> text;  // owns the bytes the views point into
};

inline Table read_table(const fs::path& path, std::string_view header) {
  Table t;
  t.path = path.string();
  t.text = std::make_unique<const std::string>(read_file(path));
  std::string_view text = *t.text;
  if (text.empty()) throw DataError(t.path + ": empty file, expected header '" + std::string(header) + "'");
  if (text.back() != '\n') throw DataError(t.path + ": last line is not LF-terminated");
  const std::size_t n_cols = static_cast<std::size_t>(std::count(header.begin(), header.end(), '\t')) + 1;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    auto where = [&] { return t.path + ":" + std::to_string(line_no); };
    if (line.find('\r') != std::string_view::npos) throw DataError(where() + ": CR line ending");
    if (!line.empty() && (line.back() == ' ' || line.back() == '\t')) {
      throw DataError(where() + ": trailing whitespace");
    }
    if (line_no == 1) {
      if (line != header) {
        throw DataError(where() + ": bad header '" + std::string(line) + "', expected '" +
                        std::string(header) + "'");
      }
      continue;
    }
    std::vector<std::string_view> fields;
    fields.reserve(n_cols);
    std::size_t f = 0;
    while (true) {
      const std::size_t tab = line.find('\t', f);
      fields.push_back(line.substr(f, tab == std::string_view::npos ? tab : tab - f));
      if (tab == std::string_view::npos) break;
      f = tab + 1;
    }
    if (fields.size() != n_cols) {
      throw DataError(where() + ": expected " + std::to_string(n_cols) + " columns, found " +
                      std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  return t;
}

inline std::string field_location(const Table& t, std::size_t row, std::size_t col,
                                  std::string_view name) {
  return t.path + ":" + std::to_string(t.line_numbers[row]) + ": column " +
         std::to_string(col + 1) + " (" + std::string(name) + ")";
}

inline std::int64_t parse_int(const Table& t, std::size_t row, std::size_t col,
                              std::string_view name) {
  std::string_view s = t.rows[row][col];
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(field_location(t, row, col, name) + ": malformed integer '" + std::string(s) + "'");
  }
  return v;
}

inline double parse_real(const Table& t, std::size_t row, std::size_t col, std::string_view name) {
  std::string_view s = t.rows[row][col];
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError(field_location(t, row, col, name) + ": malformed number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Checks every RunData invariant; throws DataError on the first violation.
inline void validate_run(const RunData& run) {
  const RunManifest& m = run.manifest;
  const std::string who = "run '" + m.run_id + "'";
  if (m.epochs_logged.size() < 2) {
    throw DataError(who + ": epochs_logged needs at least 2 epochs");
  }
  for (std::size_t i = 1; i < m.epochs_logged.size(); ++i) {
    if (m.epochs_logged[i] <= m.epochs_logged[i - 1]) {
      throw DataError(who + ": epochs_logged not strictly increasing at epoch " +
                      std::to_string(m.epochs_logged[i]));
    }
  }
  if (m.early_stop_index() == 0) {
    throw DataError(who + ": early_stop_epoch " + std::to_string(m.early_stop_epoch) +
                    " is not in epochs_logged");
  }
  if (static_cast<std::int64_t>(run.vocab.size()) != m.vocab_size) {
    throw DataError(who + ": vocab has " + std::to_string(run.vocab.size()) +
                    " tokens, manifest vocab_size is " + std::to_string(m.vocab_size));
  }
  std::set<std::int64_t> token_ids;
  for (std::size_t i = 0; i < run.vocab.size(); ++i) {
    const TokenMeta& t = run.vocab[i];
    if (i > 0 && t.token_id <= run.vocab[i - 1].token_id) {
      throw DataError(who + ": vocab not sorted by unique token_id at token " +
                      std::to_string(t.token_id));
    }
    if (t.train_count < 0) {
      throw DataError(who + ": token " + std::to_string(t.token_id) + " has negative train_count");
    }
    if (t.surface.find_first_of("\t\n\r") != std::string::npos) {
      throw DataError(who + ": token " + std::to_string(t.token_id) +
                      " surface contains a tab or line break");
    }
    token_ids.insert(t.token_id);
  }

  std::map<std::int64_t, std::int64_t> sentence_length;
  for (std::size_t i = 0; i < run.occurrences.size(); ++i) {
    const OccurrenceMeta& o = run.occurrences[i];
    const std::string at = who + ": occurrence " + to_string(o.id());
    if (i > 0 && !(run.occurrences[i - 1].id() < o.id())) {
      throw DataError(at + " is out of (sentence_id, position) order or duplicated");
    }
    if (!token_ids.contains(o.token_id)) {
      throw DataError(at + " refers to unknown token_id " + std::to_string(o.token_id));
    }
    if (o.sentence_length < 1 || o.position < 0 || o.position >= o.sentence_length) {
      throw DataError(at + " has position outside sentence_length " +
                      std::to_string(o.sentence_length));
    }
    auto [it, inserted] = sentence_length.emplace(o.sentence_id, o.sentence_length);
    if (!inserted && it->second != o.sentence_length) {
      throw DataError(at + " disagrees on sentence_length");
    }
    if (o.pos_tag.empty() || o.pos_tag.find_first_of("\t\n\r ") != std::string::npos) {
      throw DataError(at + " has an empty or whitespace-containing pos_tag");
    }
    if (o.pos_group != pos_group(o.pos_tag)) {
      throw DataError(at + " pos_group does not match pos_tag '" + o.pos_tag + "'");
    }
    if (m.has_discrepancy != o.discrepancy.has_value()) {
      throw DataError(at + (m.has_discrepancy
                                ? " lacks a discrepancy value but the manifest sets has_discrepancy"
                                : " has a discrepancy value but the manifest clears has_discrepancy"));
    }
    if (o.discrepancy && !(*o.discrepancy >= 0.0 && *o.discrepancy <= 1.0)) {
      throw DataError(at + " has discrepancy outside [0, 1]");
    }
  }
  if (static_cast<std::int64_t>(sentence_length.size()) != m.n_valid_sentences) {
    throw DataError(who + ": " + std::to_string(sentence_length.size()) +
                    " sentences in occurrences, manifest n_valid_sentences is " +
                    std::to_string(m.n_valid_sentences));
  }

  if (run.records.size() != m.epochs_logged.size()) {
    throw DataError(who + ": " + std::to_string(run.records.size()) + " epoch record sets for " +
                    std::to_string(m.epochs_logged.size()) + " logged epochs");
  }
  for (std::size_t e = 0; e < run.records.size(); ++e) {
    const EpochRecords& r = run.records[e];
    const std::string at = who + ": epoch " + std::to_string(m.epochs_logged[e]);
    if (r.epoch != m.epochs_logged[e]) {
      throw DataError(at + ": records labelled epoch " + std::to_string(r.epoch));
    }
    if (r.loss.size() != run.occurrences.size() || r.correct.size() != run.occurrences.size()) {
      throw DataError(at + ": " + std::to_string(r.loss.size()) + " records, expected " +
                      std::to_string(run.occurrences.size()));
    }
    for (std::size_t o = 0; o < r.loss.size(); ++o) {
      if (!std::isfinite(r.loss[o]) || r.loss[o] < 0.0) {
        throw DataError(at + ": occurrence " + to_string(run.occurrences[o].id()) +
                        " has invalid loss");
      }
      if (r.correct[o] > 1) {
        throw DataError(at + ": occurrence " + to_string(run.occurrences[o].id()) +
                        " has correct flag outside {0, 1}");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::string vocab_tsv(std::span<const TokenMeta> vocab) {
  std::string out(kVocabHeader);
  out += '\n';
  for (const TokenMeta& t : vocab) {
    out += std::to_string(t.token_id);
    out += '\t';
    out += t.surface;
    out += '\t';
    out += std::to_string(t.train_count);
    out += '\n';
  }
  return out;
}

inline std::string occurrences_tsv(std::span<const OccurrenceMeta> occurrences) {
  std::string out(kOccurrencesHeader);
  out += '\n';
  for (const OccurrenceMeta& o : occurrences) {
    out += std::to_string(o.sentence_id) + '\t' + std::to_string(o.position) + '\t' +
           std::to_string(o.token_id) + '\t' + o.pos_tag + '\t' + std::to_string(o.sentence_length) +
           '\t' + (o.discrepancy ? detail::fixed6(*o.discrepancy) : std::string("NA")) + '\n';
  }
  return out;
}

inline std::string epoch_tsv(std::span<const OccurrenceMeta> occurrences, const EpochRecords& r) {
  std::string out(kEpochHeader);
  out += '\n';
  for (std::size_t i = 0; i < occurrences.size(); ++i) {
    out += std::to_string(occurrences[i].sentence_id) + '\t' +
           std::to_string(occurrences[i].position) + '\t' + detail::fixed6(r.loss[i]) + '\t' +
           (r.correct[i] ? '1' : '0') + '\n';
  }
  return out;
}

inline std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["run_id"] = m.run_id;
  j["seed"] = m.seed;
  j["epochs_logged"] = m.epochs_logged;
  j["early_stop_epoch"] = m.early_stop_epoch;
  j["vocab_size"] = m.vocab_size;
  j["n_valid_sentences"] = m.n_valid_sentences;
  j["has_discrepancy"] = m.has_discrepancy;
  j["vocab_sha256"] = m.vocab_sha256;
  return j.dump(2) + "\n";
}

/// Writes `run` as a run directory, creating it if needed. The manifest's
/// vocab_sha256 is recomputed from the emitted vocab.tsv.
inline void write_run(const RunData& run, const fs::path& dir) {
  validate_run(run);
  fs::create_directories(dir);
  const std::string vocab_text = vocab_tsv(run.vocab);
  RunManifest manifest = run.manifest;
  manifest.vocab_sha256 = detail::sha256_hex(vocab_text);
  detail::write_file(dir / "manifest.json", manifest_json(manifest));
  detail::write_file(dir / "vocab.tsv", vocab_text);
  detail::write_file(dir / "occurrences.tsv", occurrences_tsv(run.occurrences));
  for (const EpochRecords& r : run.records) {
    detail::write_file(dir / epoch_file_name(r.epoch), epoch_tsv(run.occurrences, r));
  }
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace detail {

inline RunManifest parse_manifest(const fs::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw DataError(path.string() + ": top level is not a JSON object");
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw DataError(path.string() + ": missing key '" + key + "'");
    return j.at(key);
  };
  auto integer = [&](const char* key) {
    const nlohmann::json& v = field(key);
    if (!v.is_number_integer()) throw DataError(path.string() + ": key '" + key + "' must be an integer");
    return v.get<std::int64_t>();
  };
  auto string = [&](const char* key) {
    const nlohmann::json& v = field(key);
    if (!v.is_string()) throw DataError(path.string() + ": key '" + key + "' must be a string");
    return v.get<std::string>();
  };

  RunManifest m;
  m.run_id = string("run_id");
  m.seed = integer("seed");
  const nlohmann::json& epochs = field("epochs_logged");
  if (!epochs.is_array()) throw DataError(path.string() + ": key 'epochs_logged' must be an array");
  for (const nlohmann::json& e : epochs) {
    if (!e.is_number_integer()) {
      throw DataError(path.string() + ": epochs_logged entries must be integers");
    }
    m.epochs_logged.push_back(e.get<std::int64_t>());
  }
  m.early_stop_epoch = integer("early_stop_epoch");
  m.vocab_size = integer("vocab_size");
  m.n_valid_sentences = integer("n_valid_sentences");
  const nlohmann::json& disc = field("has_discrepancy");
  if (!disc.is_boolean()) throw DataError(path.string() + ": key 'has_discrepancy' must be a boolean");
  m.has_discrepancy = disc.get<bool>();
  m.vocab_sha256 = string("vocab_sha256");
  return m;
}

}  // namespace detail

/// Parses and fully validates one run directory.
inline RunData load_run(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError(dir.string() + ": not a directory");
  RunData run;
  run.manifest = detail::parse_manifest(dir / "manifest.json");
  const RunManifest& m = run.manifest;

  {
    const fs::path path = dir / "vocab.tsv";
    detail::Table t = detail::read_table(path, kVocabHeader);
    const std::string hash = detail::sha256_hex(*t.text);
    if (hash != m.vocab_sha256) {
      throw DataError(path.string() + ": SHA-256 " + hash + " does not match manifest vocab_sha256 " +
                      m.vocab_sha256);
    }
    if (static_cast<std::int64_t>(t.rows.size()) != m.vocab_size) {
      throw DataError(path.string() + ": expected " + std::to_string(m.vocab_size) +
                      " rows (vocab_size), found " + std::to_string(t.rows.size()));
    }
    run.vocab.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      TokenMeta tok;
      tok.token_id = detail::parse_int(t, r, 0, "token_id");
      tok.surface = std::string(t.rows[r][1]);
      tok.train_count = detail::parse_int(t, r, 2, "train_count");
      run.vocab.push_back(std::move(tok));
    }
  }

  {
    const fs::path path = dir / "occurrences.tsv";
    detail::Table t = detail::read_table(path, kOccurrencesHeader);
    run.occurrences.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      OccurrenceMeta o;
      o.sentence_id = detail::parse_int(t, r, 0, "sentence_id");
      o.position = detail::parse_int(t, r, 1, "position");
      o.token_id = detail::parse_int(t, r, 2, "token_id");
      o.pos_tag = std::string(t.rows[r][3]);
      o.pos_group = pos_group(o.pos_tag);
      o.sentence_length = detail::parse_int(t, r, 4, "sentence_length");
      if (t.rows[r][5] == "NA") {
        if (m.has_discrepancy) {
          throw DataError(detail::field_location(t, r, 5, "discrepancy") +
                          ": value is NA but manifest has_discrepancy is true");
        }
      } else {
        if (!m.has_discrepancy) {
          throw DataError(detail::field_location(t, r, 5, "discrepancy") +
                          ": value present but manifest has_discrepancy is false");
        }
        o.discrepancy = detail::parse_real(t, r, 5, "discrepancy");
      }
      if (!run.occurrences.empty() && !(run.occurrences.back().id() < o.id())) {
        throw DataError(path.string() + ":" + std::to_string(t.line_numbers[r]) + ": occurrence " +
                        to_string(o.id()) + " is out of (sentence_id, position) order or duplicated");
      }
      run.occurrences.push_back(std::move(o));
    }
  }

  run.records.reserve(m.epochs_logged.size());
  for (std::int64_t epoch : m.epochs_logged) {
    const fs::path path = dir / epoch_file_name(epoch);
    if (!fs::exists(path)) {
      throw DataError(dir.string() + ": missing record file for epoch " + std::to_string(epoch) +
                      " (" + epoch_file_name(epoch) + ")");
    }
    detail::Table t = detail::read_table(path, kEpochHeader);
    if (t.rows.size() != run.occurrences.size()) {
      throw DataError(path.string() + ": expected " + std::to_string(run.occurrences.size()) +
                      " rows (one per occurrence), found " + std::to_string(t.rows.size()));
    }
    EpochRecords rec;
    rec.epoch = epoch;
    rec.loss.reserve(t.rows.size());
    rec.correct.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const OccurrenceMeta& o = run.occurrences[r];
      const std::int64_t sid = detail::parse_int(t, r, 0, "sentence_id");
      const std::int64_t pos = detail::parse_int(t, r, 1, "position");
      if (sid != o.sentence_id || pos != o.position) {
        throw DataError(path.string() + ":" + std::to_string(t.line_numbers[r]) + ": row is " +
                        to_string(OccurrenceId{sid, pos}) + " but occurrences.tsv has " +
                        to_string(o.id()) + " at this row");
      }
      const double loss = detail::parse_real(t, r, 2, "loss");
      if (loss < 0.0) {
        throw DataError(detail::field_location(t, r, 2, "loss") + ": negative loss");
      }
      const std::string_view c = t.rows[r][3];
      if (c != "0" && c != "1") {
        throw DataError(detail::field_location(t, r, 3, "correct") + ": expected 0 or 1, found '" +
                        std::string(c) + "'");
      }
      rec.loss.push_back(loss);
      rec.correct.push_back(c == "1" ? 1 : 0);
    }
    run.records.push_back(std::move(rec));
  }

  validate_run(run);
  return run;
}

/// Shape of a run's checkpoint window: (K, early-stop index).
struct WindowShape {
  std::size_t k = 0;
  std::size_t early_stop_index = 0;
  bool operator==(const WindowShape&) const = default;
};

inline WindowShape window_shape(const RunData& run) {
  return {run.manifest.epochs_logged.size(), run.manifest.early_stop_index()};
}

/// Checks that runs can be analysed together: shared vocabulary, identical
/// window shape and unique seeds.
inline void check_cohort(std::span<const RunData> runs) {
  if (runs.empty()) throw CohortError("cohort is empty");
  const RunData& first = runs.front();
  const WindowShape shape = window_shape(first);
  std::set<std::int64_t> seeds;
  for (const RunData& r : runs) {
    if (r.manifest.vocab_sha256 != first.manifest.vocab_sha256) {
      throw CohortError("run '" + r.manifest.run_id + "' has vocabulary " +
                        r.manifest.vocab_sha256 + ", run '" + first.manifest.run_id + "' has " +
                        first.manifest.vocab_sha256);
    }
    const WindowShape s = window_shape(r);
    if (s != shape) {
      throw CohortError("run '" + r.manifest.run_id + "' has window " + std::to_string(s.k) + ":" +
                        std::to_string(s.early_stop_index) + ", run '" + first.manifest.run_id +
                        "' has " + std::to_string(shape.k) + ":" +
                        std::to_string(shape.early_stop_index));
    }
    if (!seeds.insert(r.manifest.seed).second) {
      throw CohortError("duplicate seed " + std::to_string(r.manifest.seed) + " (run '" +
                        r.manifest.run_id + "')");
    }
  }
}

inline std::vector<RunData> load_cohort(std::span<const fs::path> dirs) {
  std::vector<RunData> runs;
  runs.reserve(dirs.size());
  for (const fs::path& d : dirs) runs.push_back(load_run(d));
  check_cohort(runs);
  return runs;
}

/// Expands each path to run directories: a directory holding manifest.json
/// is a run; otherwise its immediate subdirectories holding one are taken in
/// lexicographic order.
inline std::vector<fs::path> expand_run_dirs(std::span<const fs::path> paths) {
  std::vector<fs::path> out;
  for (const fs::path& p : paths) {
    if (fs::exists(p / "manifest.json")) {
      out.push_back(p);
      continue;
    }
    if (!fs::is_directory(p)) throw DataError(p.string() + ": not a run directory");
    std::vector<fs::path> children;
    for (const fs::directory_entry& e : fs::directory_iterator(p)) {
      if (e.is_directory() && fs::exists(e.path() / "manifest.json")) children.push_back(e.path());
    }
    if (children.empty()) throw DataError(p.string() + ": contains no run directories");
    std::sort(children.begin(), children.end());
    out.insert(out.end(), children.begin(), children.end());
  }
  return out;
}

}  // namespace tokfit
