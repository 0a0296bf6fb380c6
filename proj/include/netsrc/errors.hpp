#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netsrc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed graph, config out of range, grid mismatch.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Adaptive step size collapsed; `time` is where the integrator gave up.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Modes are 0-based mode indices (mode n+1 in the usual numbering).
class RankDeficiencyError : public NumericalError {
 public:
  RankDeficiencyError(const std::string& what, std::vector<int> modes, int rank)
      : NumericalError(what), modes_(std::move(modes)), rank_(rank) {}
  const std::vector<int>& modes() const { return modes_; }
  int rank() const { return rank_; }

 private:
  std::vector<int> modes_;
  int rank_;
};

// Candidates are 0-based node indices.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, std::vector<int> candidates)
      : Error(what), candidates_(std::move(candidates)) {}
  const std::vector<int>& candidates() const { return candidates_; }

 private:
  std::vector<int> candidates_;
};

}  // namespace netsrc
