#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace twinops {

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t count = 0;
};

/// Fixed-width histogram; bins are aligned to multiples of the width and span
/// the sample range, so no sample is ever dropped.
class Histogram {
 public:
  explicit Histogram(double bin_width);

  void add(double sample);
  void add(std::span<const double> samples);

  double bin_width() const { return bin_width_; }
  std::uint64_t total() const { return total_; }
  std::vector<HistogramBin> bins() const;

  /// Two-column table with a bar per bin.
  void render(std::ostream& out, int bar_width = 40) const;

 private:
  double bin_width_;
  std::uint64_t total_ = 0;
  std::int64_t first_bin_ = 0;
  std::vector<std::uint64_t> counts_;
};

}  // namespace twinops
