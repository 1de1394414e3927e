#pragma once

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace paw1d::quad {

// An interval [lo, hi] with interior points where the integrand is allowed to
// be non-smooth. Kinks are sorted and deduplicated; kinks coinciding with an
// endpoint are dropped, kinks outside the interval are rejected.
class Partition {
 public:
  Partition(double lo, double hi, std::vector<double> kinks = {});

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::span<const double> kinks() const { return kinks_; }
  // lo, kinks..., hi
  std::vector<double> breakpoints() const;
  std::size_t piece_count() const { return kinks_.size() + 1; }

 private:
  double lo_;
  double hi_;
  std::vector<double> kinks_;
};

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are computed once and cached.
const Rule& gauss_legendre(int n);

// Composite Gauss-Legendre rule: every smooth piece of `partition` is split
// into `panels_per_piece` equal panels carrying `nodes_per_panel` nodes each.
Rule composite_rule(const Partition& partition, int nodes_per_panel, int panels_per_piece = 1);

// Composite rule for integrands carrying a factor exp(2 pi i n x) with
// |n| <= max_wavenumber. Each piece gets enough panels that a panel spans at
// most a few periods of the fastest oscillation (and at least two panels, so
// that the flat edges of bump profiles are resolved).
Rule oscillatory_rule(const Partition& partition, int nodes_per_panel, int max_wavenumber);

template <class F>
auto apply(const Rule& rule, F&& f) {
  using R = std::decay_t<decltype(f(0.0))>;
  R sum{};
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(rule.nodes[q]);
  return sum;
}

// Sum of Gauss-Legendre quadratures over each smooth piece.
template <class F>
auto integrate(F&& f, const Partition& partition, int nodes_per_piece, int panels_per_piece = 1) {
  return quad::apply(composite_rule(partition, nodes_per_piece, panels_per_piece), f);
}

}  // namespace paw1d::quad
