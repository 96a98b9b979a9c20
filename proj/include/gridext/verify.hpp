#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridext/asymptotics.hpp"
#include "gridext/ratio_extremal.hpp"

namespace gridext {

struct CheckResult {
  int criterion = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Solutions computed by one check and reused by later ones.
class VerifyCache {
 public:
  explicit VerifyCache(HarnessConfig config) : config_(std::move(config)) {}

  const HarnessConfig& config() const { return config_; }
  const ExtremalSolution& ratio(int n, int d);
  const MonicRoute& monic(int n, int d);
  const SweepReport& convergence_sweep();

  const std::map<std::pair<int, int>, ExtremalSolution>& ratio_solutions() const { return ratio_; }

 private:
  HarnessConfig config_;
  std::map<std::pair<int, int>, ExtremalSolution> ratio_;
  std::map<std::pair<int, int>, MonicRoute> monic_;
  std::optional<SweepReport> sweep_;
};

/// The fixed (n, alpha) matrix of the structure check.
inline constexpr int kStructureNs[] = {20, 40, 80};
inline constexpr double kStructureAlphas[] = {0.3, 0.5, 0.7};
/// n values of the alpha = 0.5 convergence sweep.
inline constexpr int kConvergenceNs[] = {40, 80, 160};

/// Largest value of the Lebesgue function of the n-point grid on [-1, 1],
/// from the Lagrange basis directly (n <= 12).
double lebesgue_constant(int n);

CheckResult check_constants(VerifyCache& cache);            // 1
CheckResult check_measure_identities(VerifyCache& cache);   // 2
CheckResult check_variational(VerifyCache& cache);          // 3
CheckResult check_endpoint_identity(VerifyCache& cache);    // 4
CheckResult check_small_cases(VerifyCache& cache);          // 5
CheckResult check_zero_structure(VerifyCache& cache);       // 6
CheckResult check_convergence(VerifyCache& cache);          // 7
CheckResult check_zero_distribution(VerifyCache& cache);    // 8
CheckResult check_j_functional(VerifyCache& cache);         // 9
CheckResult check_ordering(VerifyCache& cache);             // 10
CheckResult check_cr_regime(VerifyCache& cache);            // 11

/// "identities" (1-4, 9), "structure" (5, 6), "convergence" (7, 8, 10, 11)
/// or "all".  Unknown names throw InvalidArgument.
std::vector<CheckResult> run_suite(const std::string& suite, const HarnessConfig& config);

/// "[PASS] 3  title  (detail, 0.12 s)".
std::string format_check(const CheckResult& r);

}  // namespace gridext
