#include "semiflow/check_suites.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "semiflow/core.hpp"
#include "semiflow/instances.hpp"
#include "semiflow/scalar.hpp"

namespace semiflow {

namespace {

SuiteOutcome make_outcome(std::string name, double max_error, double tolerance,
                          int trials) {
  SuiteOutcome out;
  out.name = std::move(name);
  out.max_error = max_error;
  out.tolerance = tolerance;
  out.trials = trials;
  out.pass = max_error <= tolerance;
  return out;
}

/// Run `body` until it returns without breakdown, resampling the random
/// inputs; seeded draws keep the whole suite deterministic.
template <typename Body>
void with_resampling(Body&& body) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    try {
      body();
      return;
    } catch (const BreakdownError&) {
      continue;  // draw fresh inputs
    }
  }
  throw PreconditionError("check suite: persistent breakdown while sampling");
}

}  // namespace

std::vector<SuiteOutcome> associativity_suite(std::uint64_t seed, int trials,
                                              int n) {
  Rng rng(seed);
  double stein_err = 0.0;
  double pencil_err = 0.0;
  double nme_err = 0.0;
  double dare_err = 0.0;

  for (int t = 0; t < trials; ++t) {
    {
      stein::Operator op(random_stein_state(n, n, rng));
      const auto x = random_stein_state(n, n, rng);
      const auto y = random_stein_state(n, n, rng);
      const auto z = random_stein_state(n, n, rng);
      stein_err = std::max(stein_err, check_associativity(op, x, y, z));
    }
    with_resampling([&] {
      pencil::Operator op(random_pencil_state(n, rng));
      const auto x = random_pencil_state(n, rng);
      const auto y = random_pencil_state(n, rng);
      const auto z = random_pencil_state(n, rng);
      pencil_err = std::max(pencil_err, check_associativity(op, x, y, z));
    });
    with_resampling([&] {
      nme::Operator op(random_nme_state(n, rng));
      const auto x = random_nme_state(n, rng, 0.2);
      const auto y = random_nme_state(n, rng, 0.2);
      const auto z = random_nme_state(n, rng, 0.2);
      nme_err = std::max(nme_err, check_associativity(op, x, y, z));
    });
    {
      dare::Operator op(random_dare_state(n, rng));
      const auto x = random_dare_state(n, rng);
      const auto y = random_dare_state(n, rng);
      const auto z = random_dare_state(n, rng);
      dare_err = std::max(dare_err, check_associativity(op, x, y, z));
    }
  }
  return {make_outcome("associativity/stein", stein_err, 1e-10, trials),
          make_outcome("associativity/pencil", pencil_err, 1e-10, trials),
          make_outcome("associativity/nme", nme_err, 1e-10, trials),
          make_outcome("associativity/dare", dare_err, 1e-10, trials)};
}

namespace {

template <SemigroupOp Op>
std::pair<double, double> flow_errors(const Op& op,
                                      const typename Op::State& x1,
                                      int max_index) {
  std::vector<typename Op::State> iterates{x1};  // iterates[k] = X_{k+1}
  for (int k = 1; k < max_index; ++k) {
    iterates.push_back(op.apply(iterates.back(), x1));
  }
  double flow_err = 0.0;
  double symmetry_err = 0.0;
  for (int i = 1; i <= max_index; ++i) {
    for (int j = 1; i + j <= max_index; ++j) {
      const auto composed = op.apply(iterates[i - 1], iterates[j - 1]);
      flow_err = std::max(
          flow_err, state_relative_error(composed, iterates[i + j - 1]));
      const auto swapped = op.apply(iterates[j - 1], iterates[i - 1]);
      symmetry_err =
          std::max(symmetry_err, state_relative_error(composed, swapped));
    }
  }
  return {flow_err, symmetry_err};
}

}  // namespace

std::vector<SuiteOutcome> flow_suite(std::uint64_t seed, int max_index) {
  Rng rng(seed);
  const auto stein_state = random_stein_contractive(6, 0.8, rng);
  stein::Operator stein_op(stein_state);
  const auto [stein_flow, stein_sym] =
      flow_errors(stein_op, stein_state, max_index);

  const auto dare_state = random_dare_state(6, rng);
  dare::Operator dare_op(dare_state);
  const auto [dare_flow, dare_sym] =
      flow_errors(dare_op, dare_state, max_index);

  const int pairs = max_index;
  return {make_outcome("flow/stein", stein_flow, 1e-10, pairs),
          make_outcome("flow/stein-symmetry", stein_sym, 1e-10, pairs),
          make_outcome("flow/dare", dare_flow, 1e-10, pairs),
          make_outcome("flow/dare-symmetry", dare_sym, 1e-10, pairs)};
}

std::vector<SuiteOutcome> lemma_suite(std::uint64_t seed, int trials, int n) {
  Rng rng(seed);
  double nme_err = 0.0;
  double dare_err = 0.0;
  for (int t = 0; t < trials; ++t) {
    with_resampling([&] {
      const auto xa = random_nme_state(n, rng, 0.2);
      const auto xb = random_nme_state(n, rng, 0.2);
      const auto xc = random_nme_state(n, rng, 0.2);
      for (double err : nme::lemma_identity_errors(xa, xb, xc)) {
        nme_err = std::max(nme_err, err);
      }
    });
    {
      const auto xa = random_dare_state(n, rng);
      const auto xb = random_dare_state(n, rng);
      const auto xc = random_dare_state(n, rng);
      for (double err : dare::lemma_identity_errors(xa, xb, xc)) {
        dare_err = std::max(dare_err, err);
      }
    }
  }
  return {make_outcome("lemmas/nme", nme_err, 1e-10, trials),
          make_outcome("lemmas/dare", dare_err, 1e-10, trials)};
}

std::vector<SuiteOutcome> scalar_oracle_suite(std::uint64_t seed, int trials) {
  using scalar::Complex;
  Rng rng(seed);

  // Closed form h_r against r - 1 compositions of g(., x), skipping draws
  // within 1e-8 of the breakdown set where conditioning voids the tolerance.
  double rational_err = 0.0;
  int rational_used = 0;
  for (int t = 0; t < trials; ++t) {
    const Complex a = rng.complex_normal();
    const Complex x = rng.complex_normal();
    const int r = static_cast<int>(rng.uniform(2.0, 5.999));
    Complex composed = x;
    bool usable = true;
    try {
      for (int step = 1; step < r && usable; ++step) {
        usable = std::abs(x + composed - a) >= 1e-8;
        if (usable) composed = scalar::rational_plain_step(composed, a, x);
      }
      Complex xr{1.0, 0.0};
      Complex xar{1.0, 0.0};
      for (int p = 0; p < r; ++p) {
        xr *= x;
        xar *= x - a;
      }
      usable = usable && std::abs(xr - xar) >= 1e-8;
      if (usable) {
        ++rational_used;
        const Complex closed = scalar::rational_h(x, a, r);
        rational_err =
            std::max(rational_err,
                     std::abs(closed - composed) / std::max(1.0, std::abs(closed)));
      }
    } catch (const BreakdownError&) {
      continue;
    }
  }

  // Closed form H_r against r - 1 compositions of G(., Z).
  double pair_err = 0.0;
  int pair_used = 0;
  for (int t = 0; t < trials; ++t) {
    const scalar::PairProblem prob{rng.complex_normal(), rng.complex_normal()};
    const int r = static_cast<int>(rng.uniform(2.0, 5.999));
    try {
      Complex cx = prob.x1;
      Complex cy = prob.y1;
      bool usable = std::abs(prob.x1 * prob.y1) >= 1e-8;
      for (int step = 1; step < r && usable; ++step) {
        usable = std::abs(prob.x1 + cy) >= 1e-8;
        if (usable) std::tie(cx, cy) = scalar::pair_plain_step(cx, cy, prob);
      }
      if (!usable) continue;
      ++pair_used;
      const auto closed = scalar::pair_H(prob.x1, prob.y1, r);
      const double err =
          std::hypot(std::abs(closed.first - cx), std::abs(closed.second - cy)) /
          std::max(1.0, std::hypot(std::abs(closed.first), std::abs(closed.second)));
      pair_err = std::max(pair_err, err);
    } catch (const BreakdownError&) {
      continue;
    }
  }

  // Accelerated linear sequence against the plain sequence at index r^(k-1).
  double linear_err = 0.0;
  for (int t = 0; t < trials; ++t) {
    scalar::LinearProblem prob;
    prob.a = 0.9 * rng.complex_normal() / std::sqrt(2.0);
    if (std::abs(prob.a) >= 1.0) prob.a /= (2.0 * std::abs(prob.a));
    prob.b = rng.complex_normal();
    prob.x1 = rng.complex_normal();
    const int r = static_cast<int>(rng.uniform(2.0, 4.999));
    const auto accel = scalar::linear_accel_sequence(prob, r, 4);
    Complex plain = prob.x1;
    long long index = 1;
    for (std::size_t k = 1; k < accel.size(); ++k) {
      long long target = 1;
      for (std::size_t p = 0; p < k; ++p) target *= r;
      while (index < target) {
        plain = scalar::linear_plain_step(prob, plain);
        ++index;
      }
      linear_err = std::max(linear_err, std::abs(accel[k] - plain) /
                                            std::max(1.0, std::abs(plain)));
    }
  }

  // Two-sided limit classification of the rational acceleration: the
  // iteration heads to 0 when |x1/(x1-a)| < 1 and to a when > 1.
  double limit_err = 0.0;
  const int classification_trials = std::min(trials, 50);
  for (int t = 0; t < classification_trials; ++t) {
    const bool inside = (t % 2) == 0;
    const double magnitude =
        inside ? rng.uniform(0.05, 0.5) : rng.uniform(2.0, 20.0);
    const double phase = rng.uniform(0.0, 6.283185307179586);
    const Complex q = std::polar(magnitude, phase);
    Complex a = rng.complex_normal();
    if (std::abs(a) < 0.2) a += Complex{1.0, 0.0};
    const Complex y1 = a * q / (q - Complex{1.0});
    scalar::RationalProblem prob{a, y1};
    const auto seq = scalar::rational_accel_sequence(prob, 2, 6);
    const Complex limit = inside ? Complex{0.0, 0.0} : a;
    limit_err = std::max(limit_err, std::abs(seq.back() - limit));
  }

  return {
      make_outcome("scalar/rational-closed-form", rational_err, 1e-12,
                   rational_used),
      make_outcome("scalar/pair-closed-form", pair_err, 1e-12, pair_used),
      make_outcome("scalar/linear-accel-vs-plain", linear_err, 1e-12, trials),
      make_outcome("scalar/rational-limit-classes", limit_err, 1e-8,
                   classification_trials),
  };
}

std::vector<SuiteOutcome> all_suites(std::uint64_t seed, int trials) {
  std::vector<SuiteOutcome> out;
  for (auto& suite :
       {associativity_suite(seed, trials), flow_suite(seed),
        lemma_suite(seed, trials), scalar_oracle_suite(seed, trials)}) {
    out.insert(out.end(), suite.begin(), suite.end());
  }
  return out;
}

}  // namespace semiflow
