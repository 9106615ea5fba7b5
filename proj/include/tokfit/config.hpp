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

// Plain "key = value" configuration files and the small value grammars shared
// by config files and command-line flags.

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "tokfit/error.hpp"
#include "tokfit/group_key.hpp"
#include "tokfit/ingest.hpp"
#include "tokfit/synth.hpp"

namespace tokfit {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

/// Keys in file order. Blank lines and lines starting with '#' are ignored;
/// a repeated key keeps its last value.
inline std::map<std::string, std::string> read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = detail::trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(detail::trim(t.substr(eq + 1)));
  }
  return out;
}

/// Splits on commas and whitespace, dropping empty pieces.
inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

inline bool parse_bool(std::string_view s, std::string_view what) {
  if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "off" || s == "no") return false;
  throw ConfigError("invalid " + std::string(what) + " '" + std::string(s) + "' (expected true/false)");
}

/// "K:S", e.g. "20:10".
inline WindowShape parse_window(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("window must be written K:S, got '" + std::string(s) + "'");
  }
  WindowShape w;
  w.k = parse_number<std::size_t>(s.substr(0, colon), "window size");
  w.early_stop_index = parse_number<std::size_t>(s.substr(colon + 1), "early-stop index");
  if (w.k < 2 || w.early_stop_index < 1 || w.early_stop_index > w.k) {
    throw ConfigError("window " + std::string(s) + " needs K >= 2 and 1 <= S <= K");
  }
  return w;
}

/// "a:b" pair of factors, e.g. "freq:pos".
inline std::pair<Factor, Factor> parse_cross(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("cross must be written a:b, got '" + std::string(s) + "'");
  }
  const Factor a = parse_factor(s.substr(0, colon));
  const Factor b = parse_factor(s.substr(colon + 1));
  if (a == b) throw ConfigError("cannot cross factor '" + std::string(to_string(a)) + "' with itself");
  return {a, b};
}

/// Synthetic cohort settings from a key = value file. Unknown keys are errors.
inline CohortSpec parse_cohort_spec(const std::map<std::string, std::string>& kv) {
  CohortSpec spec;
  for (const auto& [key, value] : kv) {
    if (key == "n_seeds") spec.n_seeds = parse_number<std::size_t>(value, key);
    else if (key == "offset_bias") spec.offset_bias = parse_number<std::int64_t>(value, key);
    else if (key == "noise_sigma") spec.noise_sigma = parse_number<double>(value, key);
    else if (key == "jitter_sigma") spec.jitter_sigma = parse_number<double>(value, key);
    else if (key == "k_epochs") spec.k_epochs = parse_number<std::size_t>(value, key);
    else if (key == "early_stop_index") spec.early_stop_index = parse_number<std::size_t>(value, key);
    else if (key == "vocab_size") spec.vocab_size = parse_number<std::size_t>(value, key);
    else if (key == "n_sentences") spec.n_sentences = parse_number<std::size_t>(value, key);
    else if (key == "min_length") spec.min_length = parse_number<std::size_t>(value, key);
    else if (key == "max_length") spec.max_length = parse_number<std::size_t>(value, key);
    else if (key == "zipf_exponent") spec.zipf_exponent = parse_number<double>(value, key);
    else if (key == "depth") spec.depth = parse_number<double>(value, key);
    else if (key == "seed") spec.base_seed = parse_number<std::uint64_t>(value, key);
    else if (key == "with_discrepancy") spec.with_discrepancy = parse_bool(value, key);
    else if (key == "shape") {
      if (value == "cusp") spec.shape = CurveShape::Cusp;
      else if (value == "quadratic") spec.shape = CurveShape::Quadratic;
      else throw ConfigError("unknown shape '" + value + "' (expected cusp or quadratic)");
    } else if (key != "out") {
      throw ConfigError("unknown synth spec key '" + key + "'");
    }
  }
  return spec;
}

}  // namespace tokfit
