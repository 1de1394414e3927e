#include "paw1d/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "paw1d/errors.hpp"

namespace paw1d::quad {

Partition::Partition(double lo, double hi, std::vector<double> kinks) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw ValidationError("partition requires lo < hi");
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  for (double k : kinks) {
    if (k < lo || k > hi) throw ValidationError("partition kink lies outside the interval");
    if (k > lo && k < hi) kinks_.push_back(k);
  }
}

std::vector<double> Partition::breakpoints() const {
  std::vector<double> points;
  points.reserve(kinks_.size() + 2);
  points.push_back(lo_);
  points.insert(points.end(), kinks_.begin(), kinks_.end());
  points.push_back(hi_);
  return points;
}

namespace {

Rule compute_gauss_legendre(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess followed by Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 2) throw ValidationError("Gauss-Legendre rule needs at least 2 nodes");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(compute_gauss_legendre(n));
  return *slot;
}

namespace {

void append_panels(Rule& out, const Rule& ref, double lo, double hi, int panels) {
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double b = (p + 1 == panels) ? hi : a + width;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < ref.size(); ++q) {
      out.nodes.push_back(mid + half * ref.nodes[q]);
      out.weights.push_back(half * ref.weights[q]);
    }
  }
}

}  // namespace

Rule composite_rule(const Partition& partition, int nodes_per_panel, int panels_per_piece) {
  if (panels_per_piece < 1) throw ValidationError("panels_per_piece must be >= 1");
  const Rule& ref = gauss_legendre(nodes_per_panel);
  const auto points = partition.breakpoints();
  Rule out;
  out.nodes.reserve(ref.size() * panels_per_piece * (points.size() - 1));
  out.weights.reserve(out.nodes.capacity());
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    append_panels(out, ref, points[i], points[i + 1], panels_per_piece);
  return out;
}

Rule oscillatory_rule(const Partition& partition, int nodes_per_panel, int max_wavenumber) {
  const Rule& ref = gauss_legendre(nodes_per_panel);
  const auto points = partition.breakpoints();
  // Periods per panel; nodes_per_panel / periods is the sampling density.
  const double periods_per_panel = std::max(1.0, nodes_per_panel / 16.0);
  Rule out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double width = points[i + 1] - points[i];
    const double periods = width * std::abs(max_wavenumber);
    const int panels = 2 + static_cast<int>(std::ceil(periods / periods_per_panel));
    append_panels(out, ref, points[i], points[i + 1], panels);
  }
  return out;
}

}  // namespace paw1d::quad
