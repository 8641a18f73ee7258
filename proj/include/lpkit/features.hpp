#pragma once

#include <array>
#include <string>
#include <vector>

#include "lpkit/lp.hpp"

namespace lpkit {

inline constexpr int kFeatureCount = 51;
inline constexpr int kBaseFeatureCount = 18;   // indices 0-17 describe the current problem
inline constexpr int kHistoryOffset = 18;      // 18-35: initial minus current of 0-17
inline constexpr int kActionCountOffset = 36;  // 36-50: executed pass counts for ids 0-14
inline constexpr int kActionSlots = 15;

// Base features, computed from the problem alone:
//   0-3   equality rows with 1/2/3/4 entries            / #equalities
//   4     equality rows with an implied-free column     / #equalities
//   5-8   inequality rows with 1/2/3/4 entries          / #inequalities
//   9     zero-cost columns movable to a finite bound   / #columns
//   10-12 #equalities, #inequalities, #columns          / #rows
//   13-16 forcing-at-min/at-max, redundant, near-redundant rows / #rows
//   17    nnz / (#rows * #columns)
// A zero denominator counts as one, so the raw count shows through.
std::array<double, kBaseFeatureCount> base_features(const LPProblem& lp);

// Episode-scoped feature state. reset() snapshots the base features of the
// starting problem, record() accumulates executed pass ids, and extract()
// assembles the full vector for the current problem. extract() is const and
// repeatable: the same problem and history always yield the same vector.
class FeatureTracker {
 public:
  void reset(const LPProblem& lp);
  void record(const std::vector<int>& ids);
  std::vector<double> extract(const LPProblem& lp) const;

 private:
  std::array<double, kBaseFeatureCount> initial_{};
  std::array<double, kActionSlots> executed_{};
};

// Stable label for each slot, for trace output and the CLI.
const std::array<std::string, kFeatureCount>& feature_names();

}  // namespace lpkit
