#pragma once

#include <cstddef>
#include <vector>

namespace fne {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre three-term recurrence.
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(std::size_t order);

  std::size_t order() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // Integral of f over [a, b] split into `panels` equal panels.
  template <class F>
  double integrate(F&& f, double a, double b, std::size_t panels) const {
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      double panel = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) panel += weights_[i] * f(mid + 0.5 * h * nodes_[i]);
      total += 0.5 * h * panel;
    }
    return total;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace fne
