#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "achab/chabauty.hpp"
#include "achab/coleman.hpp"

namespace achab {

inline constexpr const char* kProblemSchema = "affchab-problem/1";

struct ProblemFile {
  std::string name;
  ChabautyInputs inputs;
  std::vector<ImportedIntegral> imported;
  // Prime and precision the imported values were computed at.
  long imported_prime = 0;
};

ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile load_problem(const std::string& path);

// Same problem at another auxiliary prime or precision; imported values are dropped on a prime change.
ProblemFile with_prime(const ProblemFile& file, long p, int precision);

// Small primes where the problem's preconditions hold.
std::vector<long> admissible_primes(const ProblemFile& file, long limit = 50);

// p-adic digits in the form "a0 + a1*p + a2*p^2 + O(p^N)".
std::string padic_digits(const PadicNumber& x, int digits = -1);

}  // namespace achab
