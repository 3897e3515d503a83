#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "semiflow/errors.hpp"

namespace semiflow::scalar {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Linear equation x = a x + b, |a| < 1, fixed point x* = b / (1 - a).
// ---------------------------------------------------------------------------

struct LinearProblem {
  Complex a;
  Complex b;
  Complex x1;

  Complex fixed_point() const { return b / (Complex{1.0} - a); }
  /// |a| >= 1 makes the plain iteration diverge; accepted but flagged.
  bool contractive() const { return std::abs(a) < 1.0; }
};

/// One plain step x -> a x + b.
Complex linear_plain_step(const LinearProblem& prob, Complex x);

/// Coefficient recursion of the order-r accelerated form
/// xhat_{k+1} = a_k xhat_k + b_k: a_{k+1} = a_k^r,
/// b_{k+1} = b_k (1 - a_{k+1}) / (1 - a_k).
/// Throws DegenerateCoefficientError when a_k == 1.
std::pair<Complex, Complex> linear_accel_step(Complex a_k, Complex b_k, int r);

/// First `count` accelerated iterates xhat_1..xhat_count with
/// xhat_k = x_{r^(k-1)}. Seeds the coefficient recursion at
/// a_1 = a^(r-1), b_1 = b (1 - a^(r-1)) / (1 - a), which reduces to
/// (a, b) for r = 2.
std::vector<Complex> linear_accel_sequence(const LinearProblem& prob, int r,
                                           int count);

/// Exact accelerated error |xhat_k - x*| under the verified pairing
/// xhat_k = x_{r^(k-1)}, i.e. |a|^(r^(k-1) - 1) * |x1 - x*|.
double linear_exact_error(const LinearProblem& prob, int r, int k);

// ---------------------------------------------------------------------------
// Rational equation x = b x / (b + x - a), solutions {0, a}; the plain map is
// g(x, b) with x1 = b, and its r-fold self-composition has the closed form
// h_r below. Breakdown set: x^r = (x - a)^r with a != 0.
// ---------------------------------------------------------------------------

struct RationalProblem {
  Complex a;
  Complex b;  // also the initial iterate

  void validate() const;  // b != 0 and a != b
};

/// One step of g(x, b) = b x / (b + x - a); breakdown on zero denominator.
Complex rational_plain_step(Complex x, Complex a, Complex b);

/// Closed-form r-fold composition: h_r(x) = a x^r / (x^r - (x - a)^r),
/// and h_r(x) = x / r when a = 0.
Complex rational_h(Complex x, Complex a, int r);

/// First `count` accelerated iterates y_1 = b, y_{k+1} = h_r(y_k).
std::vector<Complex> rational_accel_sequence(const RationalProblem& prob,
                                             int r, int count);

/// Closed-form accelerated iterate: y_k = a / (q^(r^(k-1)) - 1) + a with
/// q = y1 / (y1 - a); valid for a != 0.
Complex rational_accel_closed_form(Complex y1, Complex a, int r, int k);

// ---------------------------------------------------------------------------
// Coupled pair equation [x; y] = [x1 x/(x1+y); y1 y/(x1+y)] (the problem's
// parameters double as the initial pair). The accelerated map H_r has the
// closed form below; breakdown on a vanishing denominator sum.
// ---------------------------------------------------------------------------

struct PairProblem {
  Complex x1;
  Complex y1;

  void validate() const;  // x1 * y1 != 0
};

/// One step of G(Z, Z1) = [x1 x/(x1 + y); y1 y/(x1 + y)].
std::pair<Complex, Complex> pair_plain_step(Complex x, Complex y,
                                            const PairProblem& prob);

/// Closed-form accelerated step
/// H_r(x, y) = (x^r, y^r) / sum_{j=0}^{r-1} x^j y^(r-1-j).
std::pair<Complex, Complex> pair_H(Complex x, Complex y, int r);

/// First `count` accelerated pairs Zhat_1 = (x1, y1), Zhat_{k+1} = H_r(Zhat_k).
std::vector<std::pair<Complex, Complex>> pair_accel_sequence(
    const PairProblem& prob, int r, int count);

}  // namespace semiflow::scalar
