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

// Group-level validation curves over a checkpoint window and the two fitting
// measures read off them:
//
//   fitting-offset  = best_fit_index - early_stop_index   (epochs)
//   potential-gain  = accuracy[best_fit] - accuracy[early_stop]
//
// The best fit is the window epoch with the lowest group-mean validation loss.
// A negative offset means the group was already past its best (overfit) when
// training stopped; a positive one means it was still improving (underfit).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tokfit/error.hpp"
#include "tokfit/group_key.hpp"
#include "tokfit/window.hpp"

namespace tokfit {

/// Per-occurrence validation results at one checkpoint, stored column-wise and
/// indexed by occurrence.
struct EpochRecords {
  std::int64_t epoch = 0;
  std::vector<double> loss;
  std::vector<std::uint8_t> correct;

  bool operator==(const EpochRecords&) const = default;
};

struct GroupCurve {
  GroupKey group;
  std::vector<double> mean_loss;
  std::vector<double> accuracy;  // percent
  std::size_t n_occurrences = 0;
};

struct FitResult {
  GroupKey group;
  std::size_t best_fit_index = 0;  // 1-based
  std::int64_t fitting_offset = 0;
  bool censored = false;
  double potential_gain = std::numeric_limits<double>::quiet_NaN();
  double acc_at_early_stop = std::numeric_limits<double>::quiet_NaN();
  double acc_at_best_fit = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void check_curve_shape(const GroupCurve& curve, const CheckpointWindow& window) {
  if (curve.mean_loss.size() != window.size() || curve.accuracy.size() != window.size()) {
    throw StructuralError("curve for group '" + label(curve.group) + "' has " +
                          std::to_string(curve.mean_loss.size()) + " loss / " +
                          std::to_string(curve.accuracy.size()) +
                          " accuracy points, window has " + std::to_string(window.size()));
  }
}

}  // namespace detail

/// Locates the loss minimum. Equal minima resolve to the index closest to
/// early stopping, then to the earlier index. Gain fields stay NaN.
inline FitResult fitting_offset(const GroupCurve& curve, const CheckpointWindow& window) {
  detail::check_curve_shape(curve, window);
  const std::size_t k = window.size();
  const std::size_t s = window.early_stop_index();

  auto distance = [s](std::size_t i) { return i > s ? i - s : s - i; };

  std::size_t best = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double v = curve.mean_loss[i - 1];
    if (!std::isfinite(v)) {
      throw DataError("non-finite mean loss for group '" + label(curve.group) + "' at epoch " +
                      std::to_string(window.epochs()[i - 1]));
    }
    if (best == 0) {
      best = i;
      continue;
    }
    const double b = curve.mean_loss[best - 1];
    if (v < b || (v == b && distance(i) < distance(best))) best = i;
  }

  FitResult r;
  r.group = curve.group;
  r.best_fit_index = best;
  r.fitting_offset = static_cast<std::int64_t>(best) - static_cast<std::int64_t>(s);
  r.censored = best == 1 || best == k;
  return r;
}

/// fitting_offset plus the accuracy change from early stop to the best fit.
inline FitResult potential_gain(const GroupCurve& curve, const CheckpointWindow& window) {
  FitResult r = fitting_offset(curve, window);
  const std::size_t s = window.early_stop_index();
  for (std::size_t i : {s, r.best_fit_index}) {
    if (!std::isfinite(curve.accuracy[i - 1])) {
      throw DataError("non-finite accuracy for group '" + label(curve.group) + "' at epoch " +
                      std::to_string(window.epochs()[i - 1]));
    }
  }
  r.acc_at_early_stop = curve.accuracy[s - 1];
  r.acc_at_best_fit = curve.accuracy[r.best_fit_index - 1];
  r.potential_gain = r.best_fit_index == s ? 0.0 : r.acc_at_best_fit - r.acc_at_early_stop;
  return r;
}

/// Averages the records of `members` (occurrence indices) at every epoch in
/// `records`. Returns nullopt for an empty member set.
inline std::optional<GroupCurve> aggregate_group_curve(const GroupKey& group,
                                                       std::span<const EpochRecords> records,
                                                       std::span<const std::size_t> members) {
  if (members.empty()) return std::nullopt;
  GroupCurve curve;
  curve.group = group;
  curve.n_occurrences = members.size();
  curve.mean_loss.reserve(records.size());
  curve.accuracy.reserve(records.size());
  const double n = static_cast<double>(members.size());
  for (const EpochRecords& epoch : records) {
    double loss_sum = 0.0;
    std::size_t n_correct = 0;
    for (std::size_t m : members) {
      if (m >= epoch.loss.size() || m >= epoch.correct.size()) {
        throw DataError("occurrence #" + std::to_string(m) + " has no record at epoch " +
                        std::to_string(epoch.epoch));
      }
      loss_sum += epoch.loss[m];
      n_correct += epoch.correct[m] != 0;
    }
    curve.mean_loss.push_back(loss_sum / n);
    curve.accuracy.push_back(100.0 * static_cast<double>(n_correct) / n);
  }
  return curve;
}

/// Single-pass aggregation of every group at once. `assignment[o]` is the
/// group slot of occurrence o, or `kUnassigned` to leave it out. Slots with
/// no members come back as nullopt.
inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

inline std::vector<std::optional<GroupCurve>> aggregate_curves(
    std::span<const EpochRecords> records, std::span<const std::size_t> assignment,
    std::span<const GroupKey> slots) {
  const std::size_t n_slots = slots.size();
  std::vector<std::size_t> counts(n_slots, 0);
  for (std::size_t g : assignment) {
    if (g != kUnassigned) ++counts.at(g);
  }

  std::vector<double> loss_sum(n_slots);
  std::vector<std::size_t> correct_sum(n_slots);
  std::vector<std::optional<GroupCurve>> out(n_slots);
  for (std::size_t g = 0; g < n_slots; ++g) {
    if (counts[g] == 0) continue;
    out[g].emplace();
    out[g]->group = slots[g];
    out[g]->n_occurrences = counts[g];
    out[g]->mean_loss.reserve(records.size());
    out[g]->accuracy.reserve(records.size());
  }

  for (const EpochRecords& epoch : records) {
    if (epoch.loss.size() < assignment.size() || epoch.correct.size() < assignment.size()) {
      throw DataError("epoch " + std::to_string(epoch.epoch) + " has " +
                      std::to_string(epoch.loss.size()) + " records, expected " +
                      std::to_string(assignment.size()));
    }
    std::fill(loss_sum.begin(), loss_sum.end(), 0.0);
    std::fill(correct_sum.begin(), correct_sum.end(), std::size_t{0});
    for (std::size_t o = 0; o < assignment.size(); ++o) {
      const std::size_t g = assignment[o];
      if (g == kUnassigned) continue;
      loss_sum[g] += epoch.loss[o];
      correct_sum[g] += epoch.correct[o] != 0;
    }
    for (std::size_t g = 0; g < n_slots; ++g) {
      if (!out[g]) continue;
      const double n = static_cast<double>(counts[g]);
      out[g]->mean_loss.push_back(loss_sum[g] / n);
      out[g]->accuracy.push_back(100.0 * static_cast<double>(correct_sum[g]) / n);
    }
  }
  return out;
}

/// Centered 3-point moving average of the loss curve; the two end points
/// average over their single neighbour. Accuracy is left untouched.
inline GroupCurve smoothed(GroupCurve curve) {
  const std::vector<double>& in = curve.mean_loss;
  const std::size_t n = in.size();
  if (n < 2) return curve;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += in[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  curve.mean_loss = std::move(out);
  return curve;
}

}  // namespace tokfit
