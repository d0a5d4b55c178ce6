#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace villain {

/// Minimum number of bins for a reported error bar.
inline constexpr std::size_t kMinBins = 16;

/// Monte Carlo mean with binned standard error.
struct CorrelationEstimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< standard error of the bin means
  std::size_t bins = 0;
  std::uint64_t seed = 0;
  double jackknife_error = 0.0;  ///< delete-one-bin jackknife, cross-check of std_error
  double tau_int = 0.0;          ///< integrated autocorrelation time estimate, in sweeps
};

/// Streams per-sweep samples into fixed-size bins.
class Binner {
 public:
  explicit Binner(std::size_t bin_size);

  void add(double value);

  std::size_t bin_size() const { return bin_size_; }
  std::span<const double> bin_means() const { return bins_; }
  std::size_t samples() const { return samples_; }
  /// Variance of the raw samples (population form), for tau_int.
  double sample_variance() const;

  /// Appends another binner's completed bins (same bin size). Merging is
  /// associative, so independent chains can be combined in any grouping.
  void merge(const Binner& other);

 private:
  std::size_t bin_size_;
  std::vector<double> bins_;
  double partial_ = 0.0;
  std::size_t in_partial_ = 0;
  std::size_t samples_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

/// Mean and binned standard error; throws if fewer than kMinBins bins.
CorrelationEstimate summarize(const Binner& binner, std::uint64_t seed);

/// Standard error of the mean of `values` (unbiased variance).
double standard_error(std::span<const double> values);

/// Delete-one jackknife error of the mean of `values`.
double jackknife_error(std::span<const double> values);

}  // namespace villain
