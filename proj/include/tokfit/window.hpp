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

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "tokfit/error.hpp"

namespace tokfit {

/// The retained checkpoints around early stopping. Epoch identifiers are
/// strictly increasing; the early-stopping checkpoint is addressed by a
/// 1-based index into them.
class CheckpointWindow {
 public:
  CheckpointWindow(std::vector<std::int64_t> epochs, std::size_t early_stop_index)
      : epochs_(std::move(epochs)), early_stop_index_(early_stop_index) {
    if (epochs_.size() < 2) {
      throw StructuralError("checkpoint window needs at least 2 epochs, got " +
                            std::to_string(epochs_.size()));
    }
    for (std::size_t i = 1; i < epochs_.size(); ++i) {
      if (epochs_[i] <= epochs_[i - 1]) {
        throw StructuralError("checkpoint window epochs must be strictly increasing (epoch " +
                              std::to_string(epochs_[i]) + " follows " +
                              std::to_string(epochs_[i - 1]) + ")");
      }
    }
    if (early_stop_index_ < 1 || early_stop_index_ > epochs_.size()) {
      throw StructuralError("early-stop index " + std::to_string(early_stop_index_) +
                            " outside window of " + std::to_string(epochs_.size()) + " epochs");
    }
  }

  /// Window of K consecutive epochs numbered 1..K with early stop at `s`.
  static CheckpointWindow uniform(std::size_t k, std::size_t s) {
    std::vector<std::int64_t> epochs(k);
    std::iota(epochs.begin(), epochs.end(), std::int64_t{1});
    return CheckpointWindow(std::move(epochs), s);
  }

  [[nodiscard]] const std::vector<std::int64_t>& epochs() const { return epochs_; }
  [[nodiscard]] std::size_t size() const { return epochs_.size(); }
  [[nodiscard]] std::size_t early_stop_index() const { return early_stop_index_; }
  [[nodiscard]] std::int64_t early_stop_epoch() const { return epochs_[early_stop_index_ - 1]; }

  bool operator==(const CheckpointWindow&) const = default;

 private:
  std::vector<std::int64_t> epochs_;
  std::size_t early_stop_index_;
};

}  // namespace tokfit
