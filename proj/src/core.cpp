#include "semiflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace semiflow {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::MaxIterations:
      return "MaxIterations";
    case SolveStatus::Breakdown:
      return "Breakdown";
  }
  return "Unknown";
}

const char* to_string(IterationMode mode) {
  return mode == IterationMode::Plain ? "plain" : "accelerated";
}

void SolverConfig::validate() const {
  if (order < 2) throw PreconditionError("SolverConfig: order must be >= 2");
  if (!(tol > 0.0)) throw PreconditionError("SolverConfig: tol must be > 0");
  if (max_outer < 1)
    throw PreconditionError("SolverConfig: max_outer must be >= 1");
}

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

OrderEstimate estimate_order(std::span<const double> residuals) {
  if (residuals.size() < 3) {
    throw InsufficientDataError(
        "estimate_order: need at least 3 residuals, got " +
        std::to_string(residuals.size()));
  }
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (!(residuals[i] > 0.0 && residuals[i] < 1.0)) {
      throw PreconditionError(
          "estimate_order: residuals must lie strictly in (0, 1)");
    }
    if (i > 0 && !(residuals[i] < residuals[i - 1])) {
      throw NotDecreasingError(
          "estimate_order: residuals must be strictly decreasing");
    }
  }

  // Successive log-decrements: their consecutive ratio is exactly r for
  // e_k = sigma^(r^k) and exactly 1 for a geometric sequence.
  std::vector<double> decrements;
  decrements.reserve(residuals.size() - 1);
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    decrements.push_back(std::log(residuals[i + 1]) - std::log(residuals[i]));
  }
  std::vector<double> ratios;
  ratios.reserve(decrements.size() - 1);
  for (std::size_t i = 0; i + 1 < decrements.size(); ++i) {
    ratios.push_back(decrements[i + 1] / decrements[i]);
  }
  OrderEstimate est;
  est.order = median(std::move(ratios));

  if (est.order >= 1.5) {
    // Root rate of Definition-style superlinear convergence, using the
    // rounded order: e_k ~ sigma^(r^k) gives log(e_k)/r^k -> log(sigma).
    const double rhat = std::max(2.0, std::round(est.order));
    double sum = 0.0;
    double power = 1.0;  // rhat^k with k starting at 0
    for (std::size_t k = 0; k < residuals.size(); ++k) {
      sum += std::log(residuals[k]) / power;
      power *= rhat;
    }
    est.rate = std::exp(sum / static_cast<double>(residuals.size()));
  } else {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
      sum += std::log(residuals[i + 1] / residuals[i]);
    }
    est.rate = std::exp(sum / static_cast<double>(residuals.size() - 1));
  }
  return est;
}

std::optional<OrderEstimate> try_estimate_order(
    std::span<const double> residuals) {
  // Longest strictly decreasing suffix of sub-unit positive residuals.
  std::size_t begin = residuals.size();
  while (begin > 0) {
    const std::size_t prev = begin - 1;
    const double value = residuals[prev];
    if (!(value > 0.0 && value < 1.0)) break;
    if (begin < residuals.size() && !(residuals[begin] < value)) break;
    begin = prev;
  }
  const std::size_t len = residuals.size() - begin;
  if (len < 3) return std::nullopt;
  try {
    return estimate_order(residuals.subspan(begin));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace semiflow
