#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qmb {

/// Mean square displacement time series (cells^2) with provenance metadata.
/// `stderrs` is populated only for Monte-Carlo sources. `params` keeps the
/// parameters that produced the series, in a fixed emission order.
struct MsdSeries {
  std::vector<long> times;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::string source;  // exact-spectral | chain-oracle | rmt-closed-form | rmt-monte-carlo | classical
  std::vector<std::pair<std::string, std::string>> params;

  void add_param(std::string key, std::string value) {
    params.emplace_back(std::move(key), std::move(value));
  }
};

}  // namespace qmb
