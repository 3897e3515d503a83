#pragma once

#include <chrono>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semiflow/errors.hpp"
#include "semiflow/matrixkit.hpp"

namespace semiflow {

enum class IterationMode { Plain, Accelerated };

enum class SolveStatus { Converged, MaxIterations, Breakdown };

const char* to_string(SolveStatus status);
const char* to_string(IterationMode mode);

/// Driver configuration shared by every solver.
struct SolverConfig {
  int order = 2;                 // acceleration order r >= 2
  double tol = 1e-12;            // stopping tolerance on the step measure
  int max_outer = 1000;          // cap on outer steps
  IterationMode mode = IterationMode::Accelerated;
  std::uint64_t seed = 0;        // used by randomized drivers (check/bench)

  void validate() const;
};

/// Per-solve trace: one row per accepted iterate. In plain mode the iterate
/// index of row k is k; in accelerated mode it is r^(k-1), so the residual
/// column can be read against the underlying plain sequence directly.
struct ConvergenceReport {
  std::vector<double> residuals;
  std::vector<std::int64_t> iterate_indices;
  std::vector<std::int64_t> elapsed_us;  // wall clock per accepted row
  std::optional<double> estimated_order;
  std::optional<double> estimated_rate;
  SolveStatus status = SolveStatus::MaxIterations;
  std::int64_t total_applies = 0;
  std::string breakdown_detail;  // empty unless status == Breakdown

  std::size_t steps() const {
    return residuals.empty() ? 0 : residuals.size() - 1;
  }
  double final_residual() const {
    return residuals.empty() ? 0.0 : residuals.back();
  }
};

/// Binary operator F over a state domain with the semigroup (associativity)
/// property, driving X_{k+1} = F(X_k, X_1). Implementations hold the problem
/// data they need to evaluate equation residuals.
///
///  - apply:         one F evaluation; throws BreakdownError on singular
///                   pivot blocks.
///  - residual:      equation residual of the state's solution candidate
///                   (reported per accepted iterate).
///  - stop_measure:  the quantity compared against tol. Equal to residual for
///                   equation-residual stopping; iteration-difference solvers
///                   use the norm of the next plain update instead.
///  - solution_view: the state component that converges to the answer.
template <typename Op>
concept SemigroupOp = requires(const Op& op, const typename Op::State& s) {
  typename Op::State;
  { op.apply(s, s) } -> std::same_as<typename Op::State>;
  { op.residual(s) } -> std::convertible_to<double>;
  { op.stop_measure(s) } -> std::convertible_to<double>;
  { op.solution_view(s) } -> std::convertible_to<const Matrix&>;
};

/// States expose their matrix components for norm-based comparisons.
template <typename State>
concept ComponentState = requires(const State& s) {
  { s.components() };
};

/// Componentwise-maximal relative error between two states of the same type:
/// max over matrix fields of ||L_f - R_f||_F / max(1, ||L_f||_F).
template <ComponentState State>
double state_relative_error(const State& lhs, const State& rhs) {
  const auto lc = lhs.components();
  const auto rc = rhs.components();
  double worst = 0.0;
  for (std::size_t i = 0; i < lc.size(); ++i) {
    const double err = (*lc[i] - *rc[i]).norm() / std::max(1.0, lc[i]->norm());
    worst = std::max(worst, err);
  }
  return worst;
}

/// Associativity defect of F at (X, Y, Z): the componentwise-maximal relative
/// error between F(F(X,Y),Z) and F(X,F(Y,Z)). Breakdown propagates.
template <SemigroupOp Op>
double check_associativity(const Op& op, const typename Op::State& x,
                           const typename Op::State& y,
                           const typename Op::State& z) {
  const auto left = op.apply(op.apply(x, y), z);
  const auto right = op.apply(x, op.apply(y, z));
  return state_relative_error(left, right);
}

/// Convergence-order estimate from a residual stream.
///
/// order = median over k of the consecutive ratio of successive
/// log-decrements log(e_{k+1}/e_k): exactly r for e_k = sigma^(r^k) and
/// exactly 1 for a geometric sequence; the median resists the leading
/// transient. rate: for order >= 1.5 the root-rate exp(mean_k log(e_k)/r^k)
/// with r the rounded order, otherwise the geometric ratio
/// exp(mean log(e_{k+1}/e_k)).
///
/// Requires at least 3 strictly decreasing residuals, all in (0, 1);
/// throws InsufficientDataError / NotDecreasingError otherwise.
struct OrderEstimate {
  double order = 0.0;
  double rate = 0.0;
};
OrderEstimate estimate_order(std::span<const double> residuals);

/// Lenient wrapper: runs estimate_order on the longest strictly decreasing
/// suffix of sub-unit residuals, or returns nullopt when none qualifies.
std::optional<OrderEstimate> try_estimate_order(
    std::span<const double> residuals);

namespace detail {

class StepTimer {
 public:
  StepTimer() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t restart() {
    const auto now = std::chrono::steady_clock::now();
    const auto us =
        std::chrono::duration_cast<std::chrono::microseconds>(now - start_)
            .count();
    start_ = now;
    return us;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Iterate indices are tracked in int64; stop before r^(k-1) would overflow.
inline constexpr std::int64_t kIndexCap = std::int64_t{1} << 62;

inline void finalize_report(ConvergenceReport& report) {
  if (auto est = try_estimate_order(report.residuals)) {
    report.estimated_order = est->order;
    report.estimated_rate = est->rate;
  }
}

}  // namespace detail

/// Optional per-iterate observer; receives each accepted state and its
/// iterate index (used e.g. to monitor component norms along a solve).
template <typename State>
using IterateObserver =
    std::function<void(const State&, std::int64_t index)>;

template <SemigroupOp Op>
struct SolveOutcome {
  typename Op::State state;
  ConvergenceReport report;
};

/// Plain fixed-point driver: X_{k+1} = F(X_k, X_1) until
/// stop_measure <= tol or the iteration cap is reached.
template <SemigroupOp Op>
SolveOutcome<Op> plain_iterate(
    const Op& op, typename Op::State x1, const SolverConfig& cfg,
    const IterateObserver<typename Op::State>& observer = {}) {
  cfg.validate();
  SolveOutcome<Op> out{std::move(x1), {}};
  ConvergenceReport& report = out.report;
  detail::StepTimer timer;

  const typename Op::State initial = out.state;
  auto accept = [&](const typename Op::State& state, std::int64_t index) {
    report.residuals.push_back(op.residual(state));
    report.iterate_indices.push_back(index);
    report.elapsed_us.push_back(timer.restart());
    if (observer) observer(state, index);
  };

  try {
    accept(out.state, 1);
    if (op.stop_measure(out.state) <= cfg.tol) {
      report.status = SolveStatus::Converged;
      detail::finalize_report(report);
      return out;
    }
    for (int step = 1; step <= cfg.max_outer; ++step) {
      out.state = op.apply(out.state, initial);
      ++report.total_applies;
      accept(out.state, step + 1);
      if (op.stop_measure(out.state) <= cfg.tol) {
        report.status = SolveStatus::Converged;
        detail::finalize_report(report);
        return out;
      }
    }
    report.status = SolveStatus::MaxIterations;
  } catch (const BreakdownError& err) {
    report.status = SolveStatus::Breakdown;
    report.breakdown_detail = err.what();
  }
  detail::finalize_report(report);
  return out;
}

/// Order-r accelerated driver. Each outer step applies F r-1 times:
/// an inner ladder X^(1) = Xhat_k, X^(l+1) = F(Xhat_k, X^(l)) for
/// l = 1..r-2, then Xhat_{k+1} = F(Xhat_k, X^(r-1)). The accepted iterate
/// Xhat_k equals plain iterate r^(k-1); r = 2 is the doubling algorithm
/// Xhat_{k+1} = F(Xhat_k, Xhat_k), r = 3 the tripling algorithm.
template <SemigroupOp Op>
SolveOutcome<Op> accelerated_iterate(
    const Op& op, typename Op::State x1, const SolverConfig& cfg,
    const IterateObserver<typename Op::State>& observer = {}) {
  cfg.validate();
  const std::int64_t r = cfg.order;
  SolveOutcome<Op> out{std::move(x1), {}};
  ConvergenceReport& report = out.report;
  detail::StepTimer timer;

  auto accept = [&](const typename Op::State& state, std::int64_t index) {
    report.residuals.push_back(op.residual(state));
    report.iterate_indices.push_back(index);
    report.elapsed_us.push_back(timer.restart());
    if (observer) observer(state, index);
  };

  std::int64_t index = 1;  // r^(k-1) for the current Xhat_k
  try {
    accept(out.state, index);
    if (op.stop_measure(out.state) <= cfg.tol) {
      report.status = SolveStatus::Converged;
      detail::finalize_report(report);
      return out;
    }
    for (int step = 1; step <= cfg.max_outer; ++step) {
      if (index > detail::kIndexCap / r) {
        report.status = SolveStatus::MaxIterations;  // index would overflow
        detail::finalize_report(report);
        return out;
      }
      // Inner ladder; the loop body is skipped entirely for r = 2.
      typename Op::State rung = out.state;  // X^(1)
      for (std::int64_t ell = 1; ell <= r - 2; ++ell) {
        rung = op.apply(out.state, rung);
        ++report.total_applies;
      }
      out.state = op.apply(out.state, rung);
      ++report.total_applies;
      index *= r;
      accept(out.state, index);
      if (op.stop_measure(out.state) <= cfg.tol) {
        report.status = SolveStatus::Converged;
        detail::finalize_report(report);
        return out;
      }
    }
    report.status = SolveStatus::MaxIterations;
  } catch (const BreakdownError& err) {
    report.status = SolveStatus::Breakdown;
    report.breakdown_detail = err.what();
  }
  detail::finalize_report(report);
  return out;
}

/// Mode dispatch per cfg.mode.
template <SemigroupOp Op>
SolveOutcome<Op> iterate(
    const Op& op, typename Op::State x1, const SolverConfig& cfg,
    const IterateObserver<typename Op::State>& observer = {}) {
  return cfg.mode == IterationMode::Plain
             ? plain_iterate(op, std::move(x1), cfg, observer)
             : accelerated_iterate(op, std::move(x1), cfg, observer);
}

/// X_n by binary decomposition of the index: powers X_{2^j} are built by
/// self-application and combined via the discrete flow property
/// X_{i+j} = F(X_i, X_j). Equals n-1 plain steps up to rounding.
template <SemigroupOp Op>
typename Op::State flow_element(const Op& op, const typename Op::State& x1,
                                std::int64_t n) {
  if (n < 1) throw PreconditionError("flow_element: index must be >= 1");
  typename Op::State power = x1;  // X_{2^j}
  std::optional<typename Op::State> acc;
  std::int64_t remaining = n;
  while (true) {
    if (remaining & 1) {
      acc = acc ? op.apply(*acc, power) : power;
    }
    remaining >>= 1;
    if (remaining == 0) break;
    power = op.apply(power, power);
  }
  return *acc;
}

}  // namespace semiflow
