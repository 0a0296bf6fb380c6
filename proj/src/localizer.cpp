#include "netsrc/localizer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "netsrc/errors.hpp"
#include "netsrc/identifiability.hpp"

namespace netsrc {

namespace {

std::optional<ReducedSolve> try_solve(const AdjointSystem& system, int l1, int l2,
                                      double cond_threshold) {
  try {
    return solve_reduced(system, l1, l2, cond_threshold);
  } catch (const SingularSystemError&) {
    return std::nullopt;
  }
}

double relative_gap(const Vector& a, const Vector& b) {
  const double na = a.norm(), d = (a - b).norm();
  if (na == 0.0) return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return d / na;
}

CandidateScore score_row(const AdjointSystem& system, int l1, double cond_threshold) {
  CandidateScore c;
  c.l1 = l1;
  std::optional<ReducedSolve> first;
  for (int l = 0; l < system.size(); ++l) {
    if (l == l1) continue;
    auto sol = try_solve(system, l1, l, cond_threshold);
    if (!sol) continue;
    if (!first) {
      first = std::move(sol);
      c.l2 = l;
      continue;
    }
    c.l3 = l;
    c.solution = first->solution;
    c.score = relative_gap(first->solution, sol->solution);
    return c;
  }
  if (first) c.solution = first->solution;
  return c;
}

std::string list_nodes(const std::vector<int>& nodes) {
  std::ostringstream os;
  for (std::size_t k = 0; k < nodes.size(); ++k) os << (k ? "," : "") << nodes[k] + 1;
  return os.str();
}

}  // namespace

ReducedSolve solve_reduced(const AdjointSystem& system, int l1, int l2,
                           double cond_threshold) {
  const int n = system.size();
  if (l1 == l2) throw ValidationError("removed rows must differ");
  if (l1 < 0 || l2 < 0 || l1 >= n || l2 >= n) throw ValidationError("removed row out of range");
  std::vector<int> keep;
  for (int k = 0; k < n; ++k)
    if (k != l1 && k != l2) keep.push_back(k);
  const Matrix M = -system.A_reduced(keep, Eigen::all);
  const Vector b = system.rhs(keep);
  ReducedSolve out;
  out.l1 = std::min(l1, l2);
  out.l2 = std::max(l1, l2);
  out.condition = condition_number(M);
  if (!(out.condition < cond_threshold)) {
    std::ostringstream os;
    os << "reduced system without rows " << out.l1 + 1 << "," << out.l2 + 1
       << " is singular (condition " << out.condition << ")";
    throw SingularSystemError(os.str(), out.condition);
  }
  out.solution = M.partialPivLu().solve(b);
  return out;
}

LocalizationResult localize(const AdjointSystem& system, double rel_threshold,
                            double cond_threshold) {
  const int n = system.size();
  if (n < 4) throw ValidationError("localization needs at least 4 nodes");
  if (!(rel_threshold > 0)) throw ValidationError("threshold must be positive");
  LocalizationResult res;
  res.m = system.m;
  res.threshold = rel_threshold;
  res.candidates.resize(n);
#pragma omp parallel for schedule(dynamic)
  for (int l1 = 0; l1 < n; ++l1) res.candidates[l1] = score_row(system, l1, cond_threshold);

  std::vector<int> order(n);
  for (int k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return res.candidates[a].score < res.candidates[b].score;
  });
  std::vector<int> passing;
  for (auto& c : res.candidates) {
    c.consistent = c.score < rel_threshold;
    if (c.consistent) passing.push_back(c.l1);
  }
  const double best = res.candidates[order[0]].score;
  const double second = res.candidates[order[1]].score;
  if (best == 0.0)
    res.margin = second == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  else
    res.margin = second / best;

  if (passing.empty()) {
    std::ostringstream os;
    os << "no row is consistent within " << rel_threshold << " (best row "
       << order[0] + 1 << ", score " << best << ")";
    throw AmbiguityError(os.str(), {order[0]});
  }
  if (passing.size() > 1 && res.margin < kTieMargin) {
    std::ostringstream os;
    os << "rows " << list_nodes(passing) << " are all consistent (margin " << res.margin
       << ")";
    throw AmbiguityError(os.str(), passing);
  }
  res.source_node = order[0];
  return res;
}

std::vector<PairRow> consistency_table(const AdjointSystem& system, const Vector& reference,
                                       double cond_threshold) {
  const int n = system.size();
  std::vector<PairRow> rows;
  for (int l1 = 0; l1 < n; ++l1)
    for (int l2 = l1 + 1; l2 < n; ++l2) {
      PairRow row;
      row.l1 = l1;
      row.l2 = l2;
      rows.push_back(std::move(row));
    }
  const long count = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    auto& row = rows[k];
    auto sol = try_solve(system, row.l1, row.l2, cond_threshold);
    if (!sol) continue;
    row.solved = true;
    row.condition = sol->condition;
    row.solution = sol->solution;
    row.diff_norm = relative_gap(reference, sol->solution);
  }
  return rows;
}

MultiLocalization localize_multi(const std::function<AdjointSystem(int)>& assemble_for,
                                 std::span<const int> ms, double rel_threshold,
                                 int max_retries, double cond_threshold) {
  if (ms.empty()) throw ValidationError("no adjoint index given");
  MultiLocalization out;
  std::vector<std::pair<int, bool>> queue;
  for (int m : ms) queue.push_back({m, false});
  std::set<int> seen;
  int retries = max_retries;
  std::map<int, int> strong_votes, weak_votes;
  std::map<int, LocalizationResult> best;

  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto [m, is_retry] = queue[q];
    if (!seen.insert(m).second) continue;
    LocalizationAttempt att;
    att.m = m;
    att.retry = is_retry;
    bool weak = false;
    try {
      LocalizationResult r = localize(assemble_for(m), rel_threshold, cond_threshold);
      att.ok = true;
      att.source_node = r.source_node;
      att.margin = r.margin;
      weak = r.margin < kMinMargin;
      (weak ? weak_votes : strong_votes)[r.source_node]++;
      auto it = best.find(r.source_node);
      if (it == best.end() || it->second.margin < r.margin) best[r.source_node] = std::move(r);
      if (weak) att.note = "margin below " + std::to_string(static_cast<int>(kMinMargin));
    } catch (const AmbiguityError& e) {
      weak = true;
      att.note = e.what();
    }
    out.attempts.push_back(att);
    if (weak && retries > 0) {
      --retries;
      queue.push_back({m + 1, true});
    }
  }

  const auto& votes = strong_votes.empty() ? weak_votes : strong_votes;
  if (votes.empty()) {
    std::vector<int> none;
    throw AmbiguityError("no adjoint index localized the source", none);
  }
  int winner = -1, top = 0;
  for (const auto& [node, count] : votes) {
    if (count > top || (count == top && best.at(node).margin > best.at(winner).margin)) {
      winner = node;
      top = count;
    }
  }
  std::set<int> distinct;
  for (const auto& a : out.attempts)
    if (a.ok) distinct.insert(a.source_node);
  out.disagreement = distinct.size() > 1;
  out.source_node = winner;
  out.best = best.at(winner);
  return out;
}

}  // namespace netsrc
