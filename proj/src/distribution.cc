#include "stadia/distribution.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stadia {

double Rng::Exponential(double mean) {
  // 1 - U is in (0, 1], so the log is finite.
  return -mean * std::log(1.0 - NextDouble());
}

DiscreteDistribution DiscreteDistribution::FromWeights(
    std::vector<std::pair<int, double>> weights) {
  if (weights.empty()) throw std::invalid_argument("empty distribution");
  std::map<int, double> merged;
  double total = 0.0;
  for (const auto& [value, weight] : weights) {
    if (!(weight >= 0.0) || !std::isfinite(weight))
      throw std::invalid_argument("negative or non-finite weight");
    if (weight == 0.0) continue;
    merged[value] += weight;
    total += weight;
  }
  if (total <= 0.0) throw std::invalid_argument("distribution has zero mass");
  DiscreteDistribution d;
  double running = 0.0;
  for (const auto& [value, weight] : merged) {
    d.entries_.push_back({value, weight / total});
    running += weight / total;
    d.cumulative_.push_back(running);
  }
  d.cumulative_.back() = 1.0;
  return d;
}

DiscreteDistribution DiscreteDistribution::FromSamples(
    std::span<const int> samples) {
  std::map<int, double> counts;
  for (int s : samples) counts[s] += 1.0;
  return FromWeights({counts.begin(), counts.end()});
}

DiscreteDistribution DiscreteDistribution::PointMass(int value) {
  return FromWeights({{value, 1.0}});
}

double DiscreteDistribution::Mean() const {
  double mean = 0.0;
  for (const Entry& e : entries_) mean += e.value * e.probability;
  return mean;
}

double DiscreteDistribution::Variance() const {
  const double mean = Mean();
  double var = 0.0;
  for (const Entry& e : entries_)
    var += e.probability * (e.value - mean) * (e.value - mean);
  return var;
}

int DiscreteDistribution::Min() const { return entries_.front().value; }
int DiscreteDistribution::Max() const { return entries_.back().value; }

int DiscreteDistribution::Mode() const {
  const Entry* best = &entries_.front();
  for (const Entry& e : entries_)
    if (e.probability > best->probability) best = &e;
  return best->value;
}

double DiscreteDistribution::Probability(int value) const {
  for (const Entry& e : entries_)
    if (e.value == value) return e.probability;
  return 0.0;
}

double DiscreteDistribution::TailAtLeast(int value) const {
  double p = 0.0;
  for (const Entry& e : entries_)
    if (e.value >= value) p += e.probability;
  return p;
}

int DiscreteDistribution::Sample(Rng& rng) const {
  const double u = rng.NextDouble();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return entries_[static_cast<size_t>(it - cumulative_.begin())].value;
}

DiscreteDistribution DiscreteDistribution::Scaled(double factor,
                                                  int min_value) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
  std::vector<std::pair<int, double>> weights;
  for (const Entry& e : entries_) {
    const double x = e.value * factor;
    const double lo = std::floor(x);
    const double frac = x - lo;
    weights.emplace_back(std::max(min_value, static_cast<int>(lo)),
                         e.probability * (1.0 - frac));
    if (frac > 0.0)
      weights.emplace_back(std::max(min_value, static_cast<int>(lo) + 1),
                           e.probability * frac);
  }
  return FromWeights(std::move(weights));
}

double TotalVariationDistance(const DiscreteDistribution& a,
                              const DiscreteDistribution& b) {
  std::map<int, double> diff;
  for (const auto& e : a.entries()) diff[e.value] += e.probability;
  for (const auto& e : b.entries()) diff[e.value] -= e.probability;
  double sum = 0.0;
  for (const auto& [value, d] : diff) sum += std::abs(d);
  return 0.5 * sum;
}

}  // namespace stadia
