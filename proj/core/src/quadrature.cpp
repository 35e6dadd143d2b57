// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include "oofsk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "oofsk/errors.hpp"

namespace oofsk::quadrature {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double roundoff = 0.0;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double gauss = fc * kGaussWeights[3];
  double kronrod = fc * kKronrodWeights[7];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double width = std::abs(half);
  Panel p{a, b, kronrod * half, std::abs((kronrod - gauss) * half), 0.0};
  asc *= width;
  abs_sum *= width;
  if (asc != 0.0 && p.error != 0.0) {
    p.error = asc * std::min(1.0, std::pow(200.0 * p.error / asc, 1.5));
  }
  p.roundoff = 50.0 * kEpsilon * abs_sum;
  p.error = std::max(p.error, p.roundoff);
  if (!std::isfinite(p.value) || !std::isfinite(p.error)) {
    std::ostringstream msg;
    msg << "non-finite integrand on [" << a << ", " << b << "]";
    throw NumericError(msg.str());
  }
  return p;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& options) {
  if (a == b) return {};
  std::priority_queue<Panel> queue;
  queue.push(kronrod15(f, a, b));
  double value = queue.top().value;
  double error = queue.top().error;
  double roundoff = queue.top().roundoff;
  int evaluations = 15;
  std::vector<Panel> settled;

  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(value)); };

  while (error > tolerance() && error > 2.0 * roundoff) {
    if (queue.empty()) break;
    if (static_cast<int>(queue.size() + settled.size()) >= options.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge: estimate "
          << value << ", error " << error << " after " << evaluations << " evaluations";
      throw NumericError(msg.str());
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b)) ||
        std::abs(worst.b - worst.a) < 1e3 * kEpsilon * std::max(std::abs(worst.a), std::abs(worst.b))) {
      settled.push_back(worst);  // cannot be bisected further in double precision
      continue;
    }
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    roundoff += left.roundoff + right.roundoff - worst.roundoff;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum from the panels so the running update does not leak cancellation.
  Result result;
  result.evaluations = evaluations;
  result.intervals = static_cast<int>(queue.size() + settled.size());
  for (const auto& p : settled) {
    result.value += p.value;
    result.error += p.error;
  }
  while (!queue.empty()) {
    result.value += queue.top().value;
    result.error += queue.top().error;
    queue.pop();
  }
  return result;
}

Result integrate_to_infinity(const Integrand& f, double a, double width, const Options& options,
                             double tail_rel_tol) {
  if (!(width > 0.0)) throw NumericError("tail integration needs a positive panel width");
  Result total;
  double running_max = 0.0;
  int quiet_panels = 0;
  double lo = a;
  double w = width;
  for (int panel = 0; panel < 200; ++panel) {
    const double hi = lo + w;
    const Result r = integrate(f, lo, hi, options);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations + 3;
    total.intervals += r.intervals;
    const double f_hi = std::abs(f(hi));
    running_max = std::max({running_max, std::abs(f(lo)), std::abs(f(0.5 * (lo + hi))), f_hi,
                            std::abs(r.value) / w});
    if (running_max > 0.0 && f_hi <= 1e-16 * running_max &&
        std::abs(r.value) <= tail_rel_tol * std::abs(total.value)) {
      if (++quiet_panels >= 3) return total;
    } else {
      quiet_panels = 0;
    }
    lo = hi;
    w *= 2.0;
  }
  if (running_max == 0.0) return total;
  std::ostringstream msg;
  msg << "tail integration from " << a << " did not decay after 200 panels (estimate "
      << total.value << ")";
  throw NumericError(msg.str());
}

}  // namespace oofsk::quadrature
