#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pinlab/partition.hpp"

namespace pinlab {

// One bisection probe: the estimate at a candidate density.
struct ScanProbe {
  double p = 0.0;
  double value = 0.0;
  double stderr_ = 0.0;
  bool localized = false;
};

struct ScanResult {
  double beta = 0.0;
  double p_c_est = 0.0;   // geometric midpoint of the final bracket
  double p_low = 0.0;     // final delocalized endpoint
  double p_high = 0.0;    // final localized endpoint
  double f_low = 0.0;     // estimates at the initial bracket
  double f_low_stderr = 0.0;
  double f_high = 0.0;
  double f_high_stderr = 0.0;
  double slope = 0.0;       // -log(p_c_est) / beta
  double p_annealed = 0.0;  // 1/(e^beta - 1), reported beside the estimate
  bool above_annealed = false;  // p_c_est >= p_annealed; holds for small
                                // constants, can fail once C exceeds the
                                // gap-law normalizer (reported, see README)
  std::int64_t n_charges = 0;
  int replicas = 0;
  std::uint64_t seed = 0;
  std::vector<ScanProbe> trace;  // every probe, in evaluation order
};

// Localization calls are statistical: positive means the estimate exceeds
// max(epsilon, 3 stderr). Bisects p between p^a(beta)/2 and 1 for each beta
// on the grid, to at most `depth` probes per beta (brackets and probes are
// all kept for audit).
std::vector<ScanResult> scan_critical(const std::vector<double>& beta_grid,
                                      double epsilon, double c_const,
                                      std::int64_t n_charges, int replicas,
                                      std::uint64_t seed, int depth = 20,
                                      int threads = 0);

void write_scan_csv(std::ostream& out, const std::vector<ScanResult>& rows);
void write_scan_json(std::ostream& out, const std::vector<ScanResult>& rows);

// format is "csv" or "json"; anything else is an invalid argument.
void emit_scan_report(std::ostream& out, const std::vector<ScanResult>& rows,
                      const std::string& format);

}  // namespace pinlab
