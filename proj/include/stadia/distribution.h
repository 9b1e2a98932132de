#ifndef STADIA_DISTRIBUTION_H_
#define STADIA_DISTRIBUTION_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace stadia {

// Seeded PRNG with platform-stable derived draws (std distributions are
// implementation-defined, which would break cross-build replay).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double NextDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * NextDouble(); }
  double Exponential(double mean);
  bool Bernoulli(double p) { return NextDouble() < p; }

 private:
  std::mt19937_64 engine_;
};

// Finite distribution over integers (group counts, packet counts, byte
// sizes). Entries are sorted by value, merged, and normalized to sum 1.
class DiscreteDistribution {
 public:
  struct Entry {
    int value;
    double probability;
  };

  DiscreteDistribution() = default;

  // Throws std::invalid_argument on empty input, negative weights or a zero
  // total.
  static DiscreteDistribution FromWeights(
      std::vector<std::pair<int, double>> weights);
  static DiscreteDistribution FromSamples(std::span<const int> samples);
  static DiscreteDistribution PointMass(int value);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  double Mean() const;
  double Variance() const;
  int Min() const;
  int Max() const;
  // Most probable value; ties go to the smaller value.
  int Mode() const;
  double Probability(int value) const;
  // P(X >= value).
  double TailAtLeast(int value) const;

  int Sample(Rng& rng) const;

  // Linear transform of the support, x -> x * factor, splitting each mass
  // between floor and ceil so the mean scales exactly. Values are clamped to
  // at least `min_value`.
  DiscreteDistribution Scaled(double factor, int min_value) const;

 private:
  std::vector<Entry> entries_;
  std::vector<double> cumulative_;
};

double TotalVariationDistance(const DiscreteDistribution& a,
                              const DiscreteDistribution& b);

}  // namespace stadia

#endif  // STADIA_DISTRIBUTION_H_
