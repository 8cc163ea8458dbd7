#include "casimir/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir::numerics {

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0.0 && relative_tolerance <= 1e-3)) {
    throw std::invalid_argument("quadrature relative_tolerance must lie in (0, 1e-3]");
  }
  if (!(absolute_floor > 0.0 && absolute_floor < 1.0)) {
    throw std::invalid_argument("quadrature absolute_floor must lie in (0, 1)");
  }
  if (max_subdivisions < 8) {
    throw std::invalid_argument("quadrature max_subdivisions must be at least 8");
  }
}

void SummationSpec::validate() const {
  if (!(term_cutoff_ratio > 0.0 && term_cutoff_ratio <= 1e-6)) {
    throw std::invalid_argument("term_cutoff_ratio must lie in (0, 1e-6]");
  }
  if (max_matsubara_index < 100) {
    throw std::invalid_argument("max_matsubara_index must be at least 100");
  }
}

double zeta3() {
  // zeta(3) = 5/2 sum_{k>=1} (-1)^{k+1} / (k^3 C(2k, k)); terms shrink by ~4 per step.
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 1; k <= 40; ++k) {
    binom *= 2.0 * (2.0 * k - 1.0) / k;
    const double term = 1.0 / (static_cast<double>(k) * k * k * binom);
    sum += (k % 2 == 1) ? term : -term;
  }
  return 2.5 * sum;
}

namespace {

// zeta(3 - k) / k! is only needed for k >= 3; zeta(-n) = -B_{n+1}/(n+1) and
// vanishes at negative even integers.
double zeta_3_minus(int k) {
  switch (k) {
    case 3: return -0.5;
    case 4: return -1.0 / 12.0;
    case 6: return 1.0 / 120.0;
    case 8: return -1.0 / 252.0;
    case 10: return 1.0 / 240.0;
    case 12: return -1.0 / 132.0;
    case 14: return 691.0 / 32760.0;
    case 16: return -1.0 / 12.0;
    case 18: return 3617.0 / 8160.0;
    case 20: return -43867.0 / 14364.0;
    default: return 0.0;
  }
}

}  // namespace

double polylog3(double z) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw std::domain_error("polylog3: argument must lie in [0, 1]");
  }
  if (z == 0.0) return 0.0;
  if (z == 1.0) return zeta3();
  if (z <= 0.5) {
    double power = z;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      const double term = power / (static_cast<double>(k) * k * k);
      sum += term;
      if (term < 1e-18 * sum) break;
      power *= z;
    }
    return sum;
  }
  // Expansion about z = 1 in mu = ln z, convergent for |mu| < 2 pi:
  // Li3(e^mu) = zeta(3) + zeta(2) mu + (3/2 - ln(-mu)) mu^2 / 2 + sum_{k>=3} zeta(3-k) mu^k / k!
  const double mu = std::log(z);
  const double zeta2 = constants::kPi * constants::kPi / 6.0;
  double sum = zeta3() + zeta2 * mu + (1.5 - std::log(-mu)) * mu * mu / 2.0;
  double power = mu * mu;
  double factorial = 2.0;
  for (int k = 3; k <= 20; ++k) {
    power *= mu;
    factorial *= k;
    sum += zeta_3_minus(k) * power / factorial;
  }
  return sum;
}

SummationResult matsubara_sum(const TermBatch& terms, const SummationSpec& spec,
                              long batch_size) {
  spec.validate();
  CompensatedSum sum;
  std::vector<double> batch(static_cast<std::size_t>(std::max(1L, batch_size)));
  std::vector<double> history;
  if (spec.epsilon_acceleration) history.reserve(32);

  auto finish = [&](long index) {
    SummationResult result{sum.value(), index};
    if (spec.epsilon_acceleration && history.size() >= 3) {
      result.value = wynn_epsilon(history);
    }
    return result;
  };

  long l = 0;
  while (l <= spec.max_matsubara_index) {
    const long count = std::min<long>(static_cast<long>(batch.size()),
                                      spec.max_matsubara_index - l + 1);
    std::span<double> out(batch.data(), static_cast<std::size_t>(count));
    terms(l, out);
    for (long i = 0; i < count; ++i, ++l) {
      const double term = out[static_cast<std::size_t>(i)];
      if (l == 0) {
        sum.add(0.5 * term);
      } else {
        const double partial = sum.value();
        if (std::abs(term) <= spec.term_cutoff_ratio * std::abs(partial)) {
          return finish(l);
        }
        sum.add(term);
      }
      if (spec.epsilon_acceleration) {
        if (history.size() == 32) history.erase(history.begin());
        history.push_back(sum.value());
      }
    }
  }
  throw ConvergenceError("Matsubara sum did not reach cutoff by index " +
                             std::to_string(spec.max_matsubara_index),
                         sum.value());
}

SummationResult matsubara_sum(const std::function<double(long)>& term,
                              const SummationSpec& spec) {
  return matsubara_sum(
      [&term](long first, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = term(first + static_cast<long>(i));
      },
      spec, 1);
}

double wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return 0.0;
  // Two rolling columns of the epsilon table.
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> curr(s.begin(), s.end());
  double best = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    for (std::size_t i = 0; i + k < n; ++i) {
      const double diff = curr[i + 1] - curr[i];
      if (diff == 0.0) return curr[i + 1];
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    prev = std::move(curr);
    curr = std::move(next);
    if (k % 2 == 0) best = curr.back();
  }
  return best;
}

DerivativeResult derivative_central(const std::function<double(double)>& f, double x, double h) {
  if (!(h > 0.0) || x + 0.5 * h == x || std::abs(h) < 1e-13 * std::abs(x)) {
    throw std::domain_error("derivative_central: step underflows the abscissa precision");
  }
  const double f1p = f(x + h), f1m = f(x - h);
  const double f2p = f(x + 2 * h), f2m = f(x - 2 * h);
  const double fhp = f(x + 0.5 * h), fhm = f(x - 0.5 * h);
  const double coarse = (f2m - 8.0 * f1m + 8.0 * f1p - f2p) / (12.0 * h);
  const double fine = (f1m - 8.0 * fhm + 8.0 * fhp - f1p) / (6.0 * h);
  const double value = fine + (fine - coarse) / 15.0;
  const double scale = std::abs(f1p) + std::abs(f1m) + std::abs(f2p) + std::abs(f2m) +
                       std::abs(fhp) + std::abs(fhm);
  const double roundoff = 20.0 * std::numeric_limits<double>::epsilon() * scale / h;
  return {value, std::abs(fine - coarse) / 15.0 + roundoff};
}

}  // namespace casimir::numerics
