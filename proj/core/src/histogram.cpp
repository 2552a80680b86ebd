#include "twinops/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "twinops/error.hpp"

namespace twinops {

Histogram::Histogram(double bin_width) : bin_width_(bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw Error(Errc::InvalidArgument, "histogram bin width must be positive");
  }
}

void Histogram::add(double sample) {
  if (!std::isfinite(sample)) throw Error(Errc::InvalidArgument, "histogram sample must be finite");
  const auto bin = static_cast<std::int64_t>(std::floor(sample / bin_width_));
  if (counts_.empty()) {
    first_bin_ = bin;
    counts_.push_back(0);
  } else if (bin < first_bin_) {
    counts_.insert(counts_.begin(), static_cast<std::size_t>(first_bin_ - bin), 0);
    first_bin_ = bin;
  } else if (bin >= first_bin_ + static_cast<std::int64_t>(counts_.size())) {
    counts_.resize(static_cast<std::size_t>(bin - first_bin_ + 1), 0);
  }
  ++counts_[static_cast<std::size_t>(bin - first_bin_)];
  ++total_;
}

void Histogram::add(std::span<const double> samples) {
  for (double s : samples) add(s);
}

std::vector<HistogramBin> Histogram::bins() const {
  std::vector<HistogramBin> out;
  out.reserve(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const double lower = static_cast<double>(first_bin_ + static_cast<std::int64_t>(i)) * bin_width_;
    out.push_back({lower, lower + bin_width_, counts_[i]});
  }
  return out;
}

void Histogram::render(std::ostream& out, int bar_width) const {
  const std::uint64_t peak = counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(3);
  for (const auto& bin : bins()) {
    const int bar = peak == 0 ? 0 : static_cast<int>(std::lround(static_cast<double>(bin.count) * bar_width / peak));
    out << std::setw(10) << bin.lower << " - " << std::setw(10) << bin.upper << "  " << std::setw(8) << bin.count
        << "  " << std::string(static_cast<std::size_t>(bar), '#') << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace twinops
