#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "netsrc/adjoint.hpp"

namespace netsrc {

// Passing candidates closer than this ratio are reported as ambiguous.
inline constexpr double kTieMargin = 2.0;
// Wins below this margin count as weak; localize_multi then tries m+1.
inline constexpr double kMinMargin = 10.0;

struct ReducedSolve {
  int l1 = 0;
  int l2 = 0;
  Vector solution;  // values at system.unknowns
  double condition = 0.0;
};

// Drops rows l1, l2 of -A_reduced x = rhs and solves the square remainder.
// Throws SingularSystemError when the condition number reaches cond_threshold.
ReducedSolve solve_reduced(const AdjointSystem& system, int l1, int l2,
                           double cond_threshold = 1e12);

struct CandidateScore {
  int l1 = 0;
  int l2 = -1;
  int l3 = -1;
  // |x(l1,l2) - x(l1,l3)| / |x(l1,l2)|; +inf when untestable.
  double score = std::numeric_limits<double>::infinity();
  bool consistent = false;
  Vector solution;  // x(l1,l2)
};

struct LocalizationResult {
  int source_node = -1;
  int m = 0;
  double threshold = 0.0;
  // Smallest other score over the winning score.
  double margin = 0.0;
  std::vector<CandidateScore> candidates;  // one per row, in row order

  const CandidateScore& winner() const { return candidates[source_node]; }
};

// Each row l1 is tested against the two smallest admissible rows l2 < l3.
// Throws AmbiguityError when no candidate passes the threshold, or when
// several pass and the margin is below kTieMargin.
LocalizationResult localize(const AdjointSystem& system, double rel_threshold = 1e-3,
                            double cond_threshold = 1e12);

struct PairRow {
  int l1 = 0;
  int l2 = 0;
  bool solved = false;
  Vector solution;
  double condition = 0.0;
  double diff_norm = 0.0;  // relative distance to the reference solution
};

// All row pairs l1 < l2, compared against `reference`.
std::vector<PairRow> consistency_table(const AdjointSystem& system,
                                       const Vector& reference,
                                       double cond_threshold = 1e12);

struct LocalizationAttempt {
  int m = 0;
  bool ok = false;
  int source_node = -1;
  double margin = 0.0;
  bool retry = false;  // added because an earlier m was weak
  std::string note;
};

struct MultiLocalization {
  int source_node = -1;
  bool disagreement = false;
  std::vector<LocalizationAttempt> attempts;
  LocalizationResult best;  // strongest result voting for the winner
};

// Majority vote over the requested m values. An m that is ambiguous or wins
// with margin below kMinMargin is followed by m+1 (at most max_retries
// extra systems overall).
MultiLocalization localize_multi(const std::function<AdjointSystem(int)>& assemble_for,
                                 std::span<const int> ms, double rel_threshold,
                                 int max_retries = 3, double cond_threshold = 1e12);

}  // namespace netsrc
