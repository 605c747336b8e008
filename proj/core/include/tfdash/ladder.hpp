#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tfdash {

/// The ordered, strictly increasing set of video bitrates offered by the
/// server, in kilobits per second. Rates are carried as doubles throughout so
/// selections can be compared for exact identity with ladder members.
class BitrateLadder {
 public:
  // Defaults to the 11-rate ladder used by the bundled scenarios.
  BitrateLadder();
  explicit BitrateLadder(std::vector<double> rates);  // throws ConfigError

  // Largest rate <= bw, if any.
  std::optional<double> floor_rate(double bw_kbps) const;
  // Smallest rate >= bw, if any.
  std::optional<double> ceil_rate(double bw_kbps) const;

  bool contains(double rate_kbps) const;

  double min_rate() const { return rates_.front(); }
  double max_rate() const { return rates_.back(); }
  std::size_t size() const { return rates_.size(); }
  const std::vector<double>& rates() const { return rates_; }

 private:
  std::vector<double> rates_;
};

std::vector<double> default_ladder_rates();

}  // namespace tfdash
