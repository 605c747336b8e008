#include "tfdash/ladder.hpp"

#include <algorithm>
#include <string>

#include "tfdash/errors.hpp"

namespace tfdash {

std::vector<double> default_ladder_rates() {
  return {235, 375, 560, 750, 1050, 1750, 2350, 3000, 3850, 4300, 5800};
}

BitrateLadder::BitrateLadder() : BitrateLadder(default_ladder_rates()) {}

BitrateLadder::BitrateLadder(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw ConfigError("bitrate ladder: at least one rate required");
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    if (!(rates_[i] > 0.0))
      throw ConfigError("bitrate ladder: rate " + std::to_string(i) + " must be > 0");
    if (i > 0 && !(rates_[i] > rates_[i - 1]))
      throw ConfigError("bitrate ladder: rates must be strictly increasing (index " +
                        std::to_string(i) + ")");
  }
}

std::optional<double> BitrateLadder::floor_rate(double bw_kbps) const {
  // first rate > bw; the one before it (if any) is the floor
  auto it = std::upper_bound(rates_.begin(), rates_.end(), bw_kbps);
  if (it == rates_.begin()) return std::nullopt;
  return *(it - 1);
}

std::optional<double> BitrateLadder::ceil_rate(double bw_kbps) const {
  auto it = std::lower_bound(rates_.begin(), rates_.end(), bw_kbps);
  if (it == rates_.end()) return std::nullopt;
  return *it;
}

bool BitrateLadder::contains(double rate_kbps) const {
  return std::binary_search(rates_.begin(), rates_.end(), rate_kbps);
}

}  // namespace tfdash
