#pragma once

// The numbered acceptance suite, shared by the acceptance test binary and the
// `selftest` CLI verb. Each criterion reports one pass/fail line.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace bdns::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Mass drift of every accepted run made by the suite, normalised by mass(0) * max(T, 1).
class MassLedger {
 public:
  void record(const std::string& label, double normalised_drift);
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

CriterionResult partition_of_unity();
CriterionResult lp_reconstruction();
CriterionResult bony_exactness();
CriterionResult identity_suite();
CriterionResult formulation_equivalence();
CriterionResult linear_references(MassLedger& ledger);
CriterionResult mass_conservation(MassLedger& ledger);
CriterionResult entropy_surrogate(MassLedger& ledger);
CriterionResult parabolic_smoothing(MassLedger& ledger);
CriterionResult self_convergence(MassLedger& ledger);
CriterionResult estimate_certificates();
CriterionResult determinism(MassLedger& ledger);

std::string format_line(const CriterionResult& r);

/// Runs the selected criteria (all when empty), printing each line as it
/// completes. Mass conservation is evaluated after the runs it audits.
std::vector<CriterionResult> run_suite(const std::vector<int>& selected, std::ostream& out);

}  // namespace bdns::selftest
