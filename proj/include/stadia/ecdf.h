#ifndef STADIA_ECDF_H_
#define STADIA_ECDF_H_

#include <span>
#include <vector>

namespace stadia {

// Empirical CDF over distinct sample values. `fractions()[i]` is the share
// of samples <= `values()[i]`; fractions are strictly increasing and end at 1.
class Ecdf {
 public:
  // Throws std::invalid_argument for an empty sample set.
  static Ecdf Build(std::span<const double> samples);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& fractions() const { return fractions_; }
  size_t sample_count() const { return count_; }

  // P(X <= x).
  double Evaluate(double x) const;
  // P(X < threshold). This is the convention behind "share of inter-packet
  // times below 1 ms".
  double FractionBelow(double threshold) const;
  // Smallest value v with P(X <= v) >= q, q in (0, 1].
  double Quantile(double q) const;

 private:
  std::vector<double> values_;
  std::vector<double> fractions_;
  size_t count_ = 0;
};

}  // namespace stadia

#endif  // STADIA_ECDF_H_
