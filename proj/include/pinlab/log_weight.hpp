#pragma once

#include <cmath>
#include <limits>

namespace pinlab {

// Nonnegative scalar stored as its natural logarithm. Partition values grow
// like e^{Theta(N)}, so sums are combined with log-sum-exp instead of ever
// leaving the log domain. Zero is represented by -inf.
class LogWeight {
 public:
  constexpr LogWeight() : log_(-std::numeric_limits<double>::infinity()) {}

  static constexpr LogWeight zero() { return LogWeight(); }
  static constexpr LogWeight one() { return from_log(0.0); }
  static constexpr LogWeight from_log(double l) { return LogWeight(l); }
  static LogWeight from_value(double v) {
    return v > 0.0 ? LogWeight(std::log(v)) : LogWeight();
  }

  double log() const { return log_; }
  double value() const { return std::exp(log_); }  // may over/underflow
  bool is_zero() const { return std::isinf(log_) && log_ < 0; }

  LogWeight& operator*=(LogWeight o) {
    if (is_zero() || o.is_zero())
      log_ = -std::numeric_limits<double>::infinity();
    else
      log_ += o.log_;
    return *this;
  }

  // log(e^a + e^b) = max + log1p(e^{-|a-b|})
  LogWeight& operator+=(LogWeight o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      log_ = o.log_;
      return *this;
    }
    double hi = log_ > o.log_ ? log_ : o.log_;
    double lo = log_ > o.log_ ? o.log_ : log_;
    log_ = hi + std::log1p(std::exp(lo - hi));
    return *this;
  }

  friend LogWeight operator*(LogWeight a, LogWeight b) { return a *= b; }
  friend LogWeight operator+(LogWeight a, LogWeight b) { return a += b; }
  friend bool operator<(LogWeight a, LogWeight b) { return a.log_ < b.log_; }
  friend bool operator<=(LogWeight a, LogWeight b) { return a.log_ <= b.log_; }

 private:
  explicit constexpr LogWeight(double l) : log_(l) {}
  double log_;
};

// Streaming log-sum-exp: keeps the running maximum and the sum rescaled to
// it, so a length-n reduction costs one exp per term. Terms more than 46
// nats below the running maximum are dropped (relative error < n * 1e-20).
class LogAccumulator {
 public:
  void add_log(double t) {
    if (std::isinf(t) && t < 0) return;
    if (t <= max_) {
      double d = t - max_;
      if (d > -46.0) sum_ += std::exp(d);
    } else {
      sum_ = std::isinf(max_) ? 1.0 : sum_ * std::exp(max_ - t) + 1.0;
      max_ = t;
    }
  }

  void add(LogWeight w) { add_log(w.log()); }

  double log_total() const {
    if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

  LogWeight total() const { return LogWeight::from_log(log_total()); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

// Kahan-compensated accumulator for linear-domain series whose terms stay
// O(1); used where masses rather than partition weights are summed.
class CompensatedSum {
 public:
  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace pinlab
