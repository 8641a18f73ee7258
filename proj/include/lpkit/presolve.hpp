#pragma once

#include <array>
#include <string_view>
#include <variant>
#include <vector>

#include "lpkit/lp.hpp"

// Presolve engine: a fixed roster of reduction routines addressed by integer
// id, a transformation stack that can map solutions of the reduced problem
// back to the original space, and helpers for running id sequences.

namespace lpkit {

// Routine ids. Gaps in the numbering are reserved ids this engine rejects.
inline constexpr std::array<int, 12> kSupportedPresolvers = {0, 1, 2, 4, 6, 7,
                                                             8, 9, 10, 11, 12, 13};
inline constexpr int kPresolverIdLimit = 15;  // ids live in [0, 15)
inline constexpr int kMaxChainLength = 64;    // cap on routines run per decision

bool is_supported_presolver(int id);
std::string_view presolver_name(int id);  // "make_fixed", ...; throws on bad id
int presolver_slot(int id);               // position in kSupportedPresolvers, -1 if absent

// Parses comma separated ids ("0,1,10"), validating support.
std::vector<int> parse_chain(std::string_view text);

// --- transformation records -------------------------------------------------

struct FixedVar {
  int col;
  double value;
};

struct RemovedRow {  // row dropped as redundant; replay is a no-op
  int row;
  double lb, ub;
  std::vector<MatrixEntry> entries;
};

struct BoundTightened {  // replay is a no-op, kept for accounting
  bool is_row;
  int index;
  double old_lb, old_ub;
};

struct SubstitutedVar {  // col eliminated via pivot row: pivot*x + others = rhs
  int col;
  int row;
  double pivot;
  double rhs;
  std::vector<MatrixEntry> others;  // column index -> coefficient
};

struct MergedDupCol {  // kept absorbs removed: y = x_kept + ratio * x_removed
  int removed, kept;
  double ratio;
  double removed_lb, removed_ub;
  double kept_lb, kept_ub;
};

struct SlackSingletonFreed {  // singleton column projected out of its row
  int col, row;
  double coef;
  double row_lb, row_ub;  // bounds before projection
  double col_lb, col_ub;
  std::vector<MatrixEntry> row_others;  // row entries excluding col
};

struct Compacted {  // index squeeze applied between rounds
  std::vector<int> row_of, col_of;  // new index -> old index (compact() maps)
  int old_row_limit, old_col_limit;
};

using Reduction = std::variant<FixedVar, RemovedRow, BoundTightened, SubstitutedVar,
                               MergedDupCol, SlackSingletonFreed, Compacted>;

// Deterministic representative of a closed interval (lower end when finite,
// else upper end, else zero).
double pick_in_interval(double lo, double hi);

class PresolveStack {
 public:
  PresolveStack() = default;
  explicit PresolveStack(const LPProblem& origin);

  void push(Reduction r) { reductions_.push_back(std::move(r)); }
  std::size_t size() const { return reductions_.size(); }
  bool empty() const { return reductions_.empty(); }
  const std::vector<Reduction>& reductions() const { return reductions_; }

  // Maps a primal point of the reduced problem (indexed by its column slots)
  // back to the original column space by replaying records in reverse.
  std::vector<double> postsolve(const std::vector<double>& reduced) const;

 private:
  int original_col_limit_ = 0;
  std::vector<Reduction> reductions_;
};

// --- application ------------------------------------------------------------

struct ApplyOutcome {
  long scanned = 0;     // candidates examined
  long reductions = 0;  // records pushed onto the stack
  bool infeasible = false;

  ApplyOutcome& operator+=(const ApplyOutcome& o) {
    scanned += o.scanned;
    reductions += o.reductions;
    infeasible = infeasible || o.infeasible;
    return *this;
  }
};

// Runs one routine over the whole problem (single greedy pass in ascending
// index order). Throws std::invalid_argument on an unsupported id.
ApplyOutcome apply_presolver(LPProblem& lp, int id, PresolveStack& stack);

// Runs ids in order, stopping early when infeasibility is proven.
ApplyOutcome apply_chain(LPProblem& lp, const std::vector<int>& ids, PresolveStack& stack);

// Squeezes tombstoned slots out of the problem, recording the index maps so
// postsolve can re-expand.
void compact_problem(LPProblem& lp, PresolveStack& stack);

}  // namespace lpkit
