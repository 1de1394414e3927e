#pragma once

#include <functional>
#include <span>
#include <vector>

namespace paw1d {

struct ValueAndSlope {
  double value;
  double slope;
};

// A real function of one variable exposing its value and first derivative,
// together with the points where it is only piecewise smooth. Periodic
// functions declare kinks inside [0, 1) and reduce their argument mod 1.
//
// At a kink the evaluator returns the average of the one-sided limits, which
// for continuous functions is the point value.
class FunctionEvaluator {
 public:
  using Callback = std::function<ValueAndSlope(double)>;

  FunctionEvaluator() = default;
  FunctionEvaluator(Callback eval, std::vector<double> kinks);

  ValueAndSlope operator()(double x) const { return eval_(x); }
  double value(double x) const { return eval_(x).value; }
  double derivative(double x) const { return eval_(x).slope; }
  std::span<const double> kinks() const { return kinks_; }

 private:
  Callback eval_;
  std::vector<double> kinks_;
};

// Reduces x to [0, 1).
double reduce_periodic(double x);

// Signed offset of x from `center` on the unit circle, in [-1/2, 1/2).
double periodic_offset(double x, double center);

}  // namespace paw1d
