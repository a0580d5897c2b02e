#include "pinlab/scan.hpp"

#include <cmath>
#include <ostream>

#include "pinlab/errors.hpp"

namespace pinlab {

namespace {

ScanProbe probe(double beta, double p, double c_const, std::int64_t n_charges,
                int replicas, std::uint64_t seed, double epsilon,
                int threads) {
  std::int64_t beta_int = static_cast<std::int64_t>(std::llround(beta));
  require(beta_int >= 1 && std::abs(beta - static_cast<double>(beta_int)) <
                               1e-9,
          ErrorKind::InvalidArgument,
          "scan intensities must be positive integers");
  ChargeLaw law = make_charge_law(beta_int, {{beta_int, p}});
  FreeEnergyEstimate est =
      estimate_free_energy(law, c_const, n_charges, replicas, seed, threads);
  ScanProbe pr;
  pr.p = p;
  pr.value = est.value;
  pr.stderr_ = est.stderr_;
  pr.localized = est.value > std::max(epsilon, 3.0 * est.stderr_);
  return pr;
}

}  // namespace

std::vector<ScanResult> scan_critical(const std::vector<double>& beta_grid,
                                      double epsilon, double c_const,
                                      std::int64_t n_charges, int replicas,
                                      std::uint64_t seed, int depth,
                                      int threads) {
  require(epsilon > 0.0, ErrorKind::InvalidArgument,
          "threshold must be positive");
  std::vector<ScanResult> rows;
  std::uint64_t probe_seed = seed;
  for (double beta : beta_grid) {
    ScanResult row;
    row.beta = beta;
    row.n_charges = n_charges;
    row.replicas = replicas;
    row.seed = seed;
    double lo = 0.5 * annealed_critical_p(beta);
    double hi = 1.0;
    ScanProbe plo = probe(beta, lo, c_const, n_charges, replicas,
                          probe_seed++, epsilon, threads);
    ScanProbe phi = probe(beta, hi, c_const, n_charges, replicas,
                          probe_seed++, epsilon, threads);
    row.trace.push_back(plo);
    row.trace.push_back(phi);
    row.f_low = plo.value;
    row.f_low_stderr = plo.stderr_;
    row.f_high = phi.value;
    row.f_high_stderr = phi.stderr_;
    if (plo.localized || !phi.localized) {
      fail(ErrorKind::Scan,
           "scan bracket failed at beta=" + std::to_string(beta) +
               ": f(low)=" + std::to_string(plo.value) +
               " f(high)=" + std::to_string(phi.value));
    }
    for (int d = 0; d < depth; ++d) {
      double mid = std::sqrt(lo * hi);
      ScanProbe pm = probe(beta, mid, c_const, n_charges, replicas,
                           probe_seed++, epsilon, threads);
      row.trace.push_back(pm);
      (pm.localized ? hi : lo) = mid;
    }
    row.p_low = lo;
    row.p_high = hi;
    row.p_c_est = std::sqrt(lo * hi);
    row.slope = -std::log(row.p_c_est) / beta;
    row.p_annealed = annealed_critical_p(beta);
    row.above_annealed = row.p_c_est >= row.p_annealed;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanResult>& rows) {
  out << "beta,p_c_est,p_low,p_high,f_low,f_low_stderr,f_high,f_high_stderr,"
         "slope,p_annealed,above_annealed,n_charges,replicas,seed\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%d,%lld,%d,%llu",
                  r.beta, r.p_c_est, r.p_low, r.p_high, r.f_low,
                  r.f_low_stderr, r.f_high, r.f_high_stderr, r.slope,
                  r.p_annealed, r.above_annealed ? 1 : 0,
                  static_cast<long long>(r.n_charges), r.replicas,
                  static_cast<unsigned long long>(r.seed));
    out << buf << "\n";
  }
}

void write_scan_json(std::ostream& out, const std::vector<ScanResult>& rows) {
  char buf[128];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i) out << ",";
    out << "\n  {\"beta\":" << num(r.beta) << ",\"p_c_est\":" << num(r.p_c_est)
        << ",\"p_low\":" << num(r.p_low) << ",\"p_high\":" << num(r.p_high)
        << ",\"f_low\":" << num(r.f_low) << ",\"f_high\":" << num(r.f_high)
        << ",\"slope\":" << num(r.slope)
        << ",\"p_annealed\":" << num(r.p_annealed)
        << ",\"above_annealed\":" << (r.above_annealed ? "true" : "false")
        << ",\"n_charges\":" << r.n_charges << ",\"replicas\":" << r.replicas
        << ",\"seed\":" << r.seed << ",\"probes\":[";
    for (std::size_t j = 0; j < r.trace.size(); ++j) {
      const auto& pr = r.trace[j];
      if (j) out << ",";
      out << "{\"p\":" << num(pr.p) << ",\"value\":" << num(pr.value)
          << ",\"stderr\":" << num(pr.stderr_)
          << ",\"localized\":" << (pr.localized ? "true" : "false") << "}";
    }
    out << "]}";
  }
  out << "\n]\n";
}

void emit_scan_report(std::ostream& out, const std::vector<ScanResult>& rows,
                      const std::string& format) {
  if (format == "csv") {
    write_scan_csv(out, rows);
  } else if (format == "json") {
    write_scan_json(out, rows);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown report format '" + format +
                                         "' (want csv or json)");
  }
}

}  // namespace pinlab
