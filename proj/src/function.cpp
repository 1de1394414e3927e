#include "paw1d/function.hpp"

#include <algorithm>
#include <cmath>

namespace paw1d {

FunctionEvaluator::FunctionEvaluator(Callback eval, std::vector<double> kinks)
    : eval_(std::move(eval)), kinks_(std::move(kinks)) {
  std::sort(kinks_.begin(), kinks_.end());
  kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
}

double reduce_periodic(double x) {
  double r = x - std::floor(x);
  // floor can round x - floor(x) up to exactly 1 for tiny negative x.
  return r >= 1.0 ? 0.0 : r;
}

double periodic_offset(double x, double center) {
  double y = reduce_periodic(x - center + 0.5) - 0.5;
  return y;
}

}  // namespace paw1d
