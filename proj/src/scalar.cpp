#include "semiflow/scalar.hpp"

#include <cmath>

namespace semiflow::scalar {

namespace {

Complex cpow_int(Complex base, long long exp) {
  Complex result{1.0, 0.0};
  Complex factor = base;
  while (exp > 0) {
    if (exp & 1) result *= factor;
    factor *= factor;
    exp >>= 1;
  }
  return result;
}

void require_order(int r) {
  if (r < 2) throw PreconditionError("scalar: acceleration order must be >= 2");
}

}  // namespace

Complex linear_plain_step(const LinearProblem& prob, Complex x) {
  return prob.a * x + prob.b;
}

std::pair<Complex, Complex> linear_accel_step(Complex a_k, Complex b_k, int r) {
  require_order(r);
  if (a_k == Complex{1.0, 0.0}) {
    throw DegenerateCoefficientError(
        "linear_accel_step: degenerate coefficient a_k = 1");
  }
  const Complex a_next = cpow_int(a_k, r);
  const Complex b_next = b_k * (Complex{1.0} - a_next) / (Complex{1.0} - a_k);
  return {a_next, b_next};
}

std::vector<Complex> linear_accel_sequence(const LinearProblem& prob, int r,
                                           int count) {
  require_order(r);
  if (count < 1) return {};
  if (prob.a == Complex{1.0, 0.0}) {
    throw DegenerateCoefficientError(
        "linear_accel_sequence: a = 1 has no fixed point");
  }
  std::vector<Complex> sequence;
  sequence.reserve(static_cast<std::size_t>(count));
  sequence.push_back(prob.x1);
  // Seed so that one accelerated step crosses r - 1 plain steps:
  // xhat_2 = x_r needs a_1 = a^(r-1), b_1 = b (1 + a + ... + a^(r-2)).
  Complex a_k = cpow_int(prob.a, r - 1);
  Complex b_k = prob.b * (Complex{1.0} - a_k) / (Complex{1.0} - prob.a);
  Complex x = prob.x1;
  for (int k = 1; k < count; ++k) {
    x = a_k * x + b_k;
    sequence.push_back(x);
    auto next = linear_accel_step(a_k, b_k, r);
    a_k = next.first;
    b_k = next.second;
  }
  return sequence;
}

double linear_exact_error(const LinearProblem& prob, int r, int k) {
  require_order(r);
  if (k < 1) throw PreconditionError("linear_exact_error: k must be >= 1");
  const double base_error = std::abs(prob.x1 - prob.fixed_point());
  const double exponent = std::pow(static_cast<double>(r), k - 1) - 1.0;
  return std::pow(std::abs(prob.a), exponent) * base_error;
}

void RationalProblem::validate() const {
  if (b == Complex{0.0, 0.0}) {
    throw PreconditionError("rational problem: b must be nonzero");
  }
  if (a == b) throw PreconditionError("rational problem: a must differ from b");
}

Complex rational_plain_step(Complex x, Complex a, Complex b) {
  const Complex denom = b + x - a;
  if (denom == Complex{0.0, 0.0}) {
    throw BreakdownError("rational step: b + x - a vanished");
  }
  return b * x / denom;
}

Complex rational_h(Complex x, Complex a, int r) {
  require_order(r);
  if (a == Complex{0.0, 0.0}) {
    return x / static_cast<double>(r);
  }
  const Complex xr = cpow_int(x, r);
  const Complex denom = xr - cpow_int(x - a, r);
  if (denom == Complex{0.0, 0.0}) {
    throw BreakdownError("rational_h: x^r - (x-a)^r vanished");
  }
  return a * xr / denom;
}

std::vector<Complex> rational_accel_sequence(const RationalProblem& prob,
                                             int r, int count) {
  prob.validate();
  require_order(r);
  if (count < 1) return {};
  std::vector<Complex> sequence;
  sequence.reserve(static_cast<std::size_t>(count));
  Complex y = prob.b;
  sequence.push_back(y);
  for (int k = 1; k < count; ++k) {
    y = rational_h(y, prob.a, r);
    sequence.push_back(y);
  }
  return sequence;
}

Complex rational_accel_closed_form(Complex y1, Complex a, int r, int k) {
  require_order(r);
  if (k < 1) throw PreconditionError("rational closed form: k must be >= 1");
  if (a == Complex{0.0, 0.0}) {
    throw PreconditionError("rational closed form: requires a != 0");
  }
  const Complex q = y1 / (y1 - a);
  const double exponent = std::pow(static_cast<double>(r), k - 1);
  // q^(r^(k-1)) via pow on the principal branch; exact for real q >= 0 and
  // adequate for the |q| <-> 1 classification this form backs.
  const Complex q_pow = std::pow(q, exponent);
  const Complex denom = q_pow - Complex{1.0};
  if (denom == Complex{0.0, 0.0}) {
    throw BreakdownError("rational closed form: q^(r^(k-1)) = 1");
  }
  return a / denom + a;
}

void PairProblem::validate() const {
  if (x1 * y1 == Complex{0.0, 0.0}) {
    throw PreconditionError("pair problem: x1 and y1 must both be nonzero");
  }
}

std::pair<Complex, Complex> pair_plain_step(Complex x, Complex y,
                                            const PairProblem& prob) {
  const Complex denom = prob.x1 + y;
  if (denom == Complex{0.0, 0.0}) {
    throw BreakdownError("pair step: x1 + y vanished");
  }
  return {prob.x1 * x / denom, prob.y1 * y / denom};
}

std::pair<Complex, Complex> pair_H(Complex x, Complex y, int r) {
  require_order(r);
  Complex denom{0.0, 0.0};
  for (int j = 0; j < r; ++j) {
    denom += cpow_int(x, j) * cpow_int(y, r - 1 - j);
  }
  if (denom == Complex{0.0, 0.0}) {
    throw BreakdownError("pair_H: power-sum denominator vanished");
  }
  return {cpow_int(x, r) / denom, cpow_int(y, r) / denom};
}

std::vector<std::pair<Complex, Complex>> pair_accel_sequence(
    const PairProblem& prob, int r, int count) {
  prob.validate();
  require_order(r);
  if (count < 1) return {};
  std::vector<std::pair<Complex, Complex>> sequence;
  sequence.reserve(static_cast<std::size_t>(count));
  std::pair<Complex, Complex> z{prob.x1, prob.y1};
  sequence.push_back(z);
  for (int k = 1; k < count; ++k) {
    z = pair_H(z.first, z.second, r);
    sequence.push_back(z);
  }
  return sequence;
}

}  // namespace semiflow::scalar
