#include "villain/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "villain/lattice.hpp"

namespace villain {

Binner::Binner(std::size_t bin_size) : bin_size_(bin_size) {
  if (bin_size == 0) throw ValidationError("bin size must be positive");
}

void Binner::add(double value) {
  partial_ += value;
  sum_ += value;
  sum_sq_ += value * value;
  ++samples_;
  if (++in_partial_ == bin_size_) {
    bins_.push_back(partial_ / static_cast<double>(bin_size_));
    partial_ = 0.0;
    in_partial_ = 0;
  }
}

double Binner::sample_variance() const {
  if (samples_ == 0) return 0.0;
  const double n = static_cast<double>(samples_);
  const double m = sum_ / n;
  return std::max(0.0, sum_sq_ / n - m * m);
}

void Binner::merge(const Binner& other) {
  if (other.bin_size_ != bin_size_) throw ValidationError("cannot merge binners of different bin size");
  bins_.insert(bins_.end(), other.bins_.begin(), other.bins_.end());
  samples_ += other.samples_;
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
}

double standard_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
}

double jackknife_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (double v : values) total += v;
  const double nn = static_cast<double>(n);
  std::vector<double> loo(n);
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = (total - values[i]) / (nn - 1.0);
    loo_mean += loo[i];
  }
  loo_mean /= nn;
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  return std::sqrt((nn - 1.0) / nn * ss);
}

CorrelationEstimate summarize(const Binner& binner, std::uint64_t seed) {
  const auto bins = binner.bin_means();
  if (bins.size() < kMinBins) {
    throw ValidationError("need at least " + std::to_string(kMinBins) + " bins, have " +
                          std::to_string(bins.size()));
  }
  CorrelationEstimate e;
  e.bins = bins.size();
  e.seed = seed;
  double mean = 0.0;
  for (double v : bins) mean += v;
  e.mean = mean / static_cast<double>(bins.size());
  e.std_error = standard_error(bins);
  e.jackknife_error = jackknife_error(bins);
  const double raw = binner.sample_variance();
  const double binned = e.std_error * e.std_error * static_cast<double>(bins.size());
  e.tau_int = raw > 0.0 ? 0.5 * static_cast<double>(binner.bin_size()) * binned / raw : 0.0;
  return e;
}

}  // namespace villain
