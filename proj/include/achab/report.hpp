#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "achab/chabauty.hpp"
#include "achab/problem.hpp"

namespace achab {

enum class RunStatus { Complete = 0, Error = 1, Partial = 2 };

struct SolveOptions {
  std::optional<long> p;
  std::optional<int> precision;
  // Restrict to one reduction type by index.
  std::optional<int> sigma;
  Execution mode = Execution::Parallel;
  // Digits shown for matrix and kernel entries.
  int digits = 8;
};

struct CandidateSummary {
  std::vector<std::string> matched;  // known point ids
  std::vector<std::string> extra;    // reconstructed points
  std::vector<std::string> unresolved;  // "type/disc"
};

struct SolveOutcome {
  RunStatus status = RunStatus::Complete;
  nlohmann::json report;
  std::string summary;
  std::vector<TypeResult> types;
  CandidateSummary candidates;
};

SolveOutcome run_solve(const ProblemFile& file, const SolveOptions& options);

struct VerifyOutcome {
  RunStatus status = RunStatus::Complete;
  bool pass = true;
  nlohmann::json report;
  std::string summary;
};

// Per-point vanishing with valuation >= N - max_loss, and determinants over point groups of one cuspidal part.
VerifyOutcome run_verify(const ProblemFile& file, const SolveOptions& options, int max_loss = 4);

nlohmann::json error_record(const std::exception& e);

}  // namespace achab
