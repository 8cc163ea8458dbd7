#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace casimir::numerics {

/// Thrown when an iterative kernel stops before meeting its tolerance. The
/// best estimate reached so far travels with the exception so callers can
/// report a flagged partial value instead of nothing.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

struct QuadratureSpec {
  double relative_tolerance = 1e-9;
  // Absolute error floor; also fixes the truncation point Y of the
  // semi-infinite range through exp(-Y) < absolute_floor.
  double absolute_floor = 1e-18;
  int max_subdivisions = 2000;

  void validate() const;
};

struct SummationSpec {
  double term_cutoff_ratio = 1e-10;
  long max_matsubara_index = 2'000'000;
  bool epsilon_acceleration = false;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

struct SummationResult {
  double value = 0.0;
  long truncation_index = 0;
};

struct DerivativeResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double zeta3();

/// Trilogarithm Li_3(z) for real z in [0, 1]. Throws std::domain_error
/// outside that range.
double polylog3(double z);

/// Length of the truncated semi-infinite range for a given floor.
inline double semi_infinite_cutoff(const QuadratureSpec& spec) {
  return std::log(1.0 / spec.absolute_floor) + 8.0;
}

namespace detail {

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_21(F& f, double lo, double hi) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double centre = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  double kronrod = wk[0] * fc;
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fsum = f(centre - half * x[i]) + f(centre + half * x[i]);
    kronrod += wk[i] * fsum;
    // Odd Kronrod nodes coincide with the 10-point Gauss nodes.
    if (i % 2 == 1) gauss += wg[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod);
  return {lo, hi, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}

template <class F>
QuadratureResult adaptive(F& f, std::span<const double> edges, const QuadratureSpec& spec) {
  std::priority_queue<Panel> queue;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    queue.push(gauss_kronrod_21(f, edges[i], edges[i + 1]));
  }
  auto totals = [&queue]() {
    CompensatedSum v;
    double e = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      v.add(copy.top().value);
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v.value(), e};
  };
  auto [value, error] = totals();
  int subdivisions = 0;
  while (error > std::max(spec.relative_tolerance * std::abs(value), spec.absolute_floor)) {
    if (subdivisions >= spec.max_subdivisions) {
      throw ConvergenceError("quadrature did not reach tolerance after " +
                                 std::to_string(subdivisions) + " subdivisions",
                             value);
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = gauss_kronrod_21(f, worst.lo, mid);
    const Panel right = gauss_kronrod_21(f, mid, worst.hi);
    queue.push(left);
    queue.push(right);
    ++subdivisions;
    // Incremental update, refreshed exactly every 64 steps to shed drift.
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (subdivisions % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  return {value, error, subdivisions};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (10/21) integration over [lo, hi],
/// starting from `initial_panels` equal pieces.
template <class F>
QuadratureResult integrate_interval(F&& f, double lo, double hi, const QuadratureSpec& spec,
                                    int initial_panels = 1) {
  const int pieces = std::max(1, initial_panels);
  std::vector<double> edges(pieces + 1);
  for (int i = 0; i <= pieces; ++i) edges[i] = lo + (hi - lo) * i / pieces;
  edges.back() = hi;
  return detail::adaptive(f, edges, spec);
}

/// Integral of f over [0, inf) for integrands carrying at least an exp(-y)
/// decay. The range is cut at Y with exp(-Y) below the absolute floor and
/// seeded with geometrically growing panels so that structure near the
/// origin is resolved from the start.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, const QuadratureSpec& spec) {
  const double y_max = semi_infinite_cutoff(spec);
  std::vector<double> edges{0.0, 0.125, 0.5, 1.5, 4.0, 9.0, 17.0, 30.0};
  while (edges.back() >= y_max) edges.pop_back();
  edges.push_back(y_max);
  return detail::adaptive(f, edges, spec);
}

/// Evaluates terms [first, first + out.size()) into `out`.
using TermBatch = std::function<void(long first, std::span<double> out)>;

/// Primed Matsubara sum: half weight on l = 0, truncated at the first l >= 1
/// whose term is below term_cutoff_ratio relative to the running sum.
/// Terms are requested in batches so callers may fill them concurrently;
/// accumulation always runs in index order.
SummationResult matsubara_sum(const TermBatch& terms, const SummationSpec& spec,
                              long batch_size = 64);

SummationResult matsubara_sum(const std::function<double(long)>& term,
                              const SummationSpec& spec);

/// Limit estimate of a sequence of partial sums by Wynn's epsilon algorithm.
double wynn_epsilon(std::span<const double> partial_sums);

/// Five-point central difference at steps h and h/2 combined by one
/// Richardson step. Throws std::domain_error when h is lost against x.
DerivativeResult derivative_central(const std::function<double(double)>& f, double x, double h);

}  // namespace casimir::numerics
