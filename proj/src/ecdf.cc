#include "stadia/ecdf.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stadia {

Ecdf Ecdf::Build(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("ecdf of empty sample set");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  Ecdf ecdf;
  ecdf.count_ = sorted.size();
  const double n = static_cast<double>(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    ecdf.values_.push_back(sorted[i]);
    ecdf.fractions_.push_back(static_cast<double>(i + 1) / n);
  }
  ecdf.fractions_.back() = 1.0;
  return ecdf;
}

double Ecdf::Evaluate(double x) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return 0.0;
  return fractions_[static_cast<size_t>(it - values_.begin()) - 1];
}

double Ecdf::FractionBelow(double threshold) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), threshold);
  if (it == values_.begin()) return 0.0;
  return fractions_[static_cast<size_t>(it - values_.begin()) - 1];
}

double Ecdf::Quantile(double q) const {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("quantile outside (0,1]");
  auto it = std::lower_bound(fractions_.begin(), fractions_.end(), q - 1e-12);
  if (it == fractions_.end()) return values_.back();
  return values_[static_cast<size_t>(it - fractions_.begin())];
}

}  // namespace stadia
