#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include "tdho/errors.hpp"

namespace tdho {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature over [a, b] for real or complex
// integrands. Stops when the summed error estimate is below
// max(abs_tol, rel_tol * |integral|); throws NumericError when max_panels is exhausted.
template <class F>
auto integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
               std::size_t max_panels = 4000) -> QuadResult<decltype(f(a))> {
  using T = decltype(f(a));
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();

  struct Panel {
    double a, b;
    T value;
    double error;
  };
  QuadResult<T> res;
  auto eval_panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const T f0 = f(mid);
    T k = f0 * wk[0];
    T g = f0 * wg[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
      const T fl = f(mid - half * xk[i]);
      const T fr = f(mid + half * xk[i]);
      k += (fl + fr) * wk[i];
      if (i % 2 == 0) g += (fl + fr) * wg[i / 2];
    }
    res.evaluations += 2 * xk.size() - 1;
    return Panel{lo, hi, k * half, std::abs((k - g) * half)};
  };
  if (a == b) return res;
  auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  Panel first = eval_panel(a, b);
  T total = first.value;
  double err = first.error;
  heap.push(first);
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (heap.size() >= max_panels) {
      std::ostringstream os;
      os.precision(3);
      os << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << err
         << " after " << heap.size() << " panels";
      throw NumericError(os.str());
    }
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > std::min(p.a, p.b) && m < std::max(p.a, p.b))) {
      throw NumericError("quadrature panel collapsed below machine resolution");
    }
    Panel l = eval_panel(p.a, m);
    Panel r = eval_panel(m, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum panels in a fixed order to drop accumulated rounding from the updates.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  T sum{};
  double esum = 0.0;
  for (const auto& p : panels) {
    sum += p.value;
    esum += p.error;
  }
  res.value = sum;
  res.error = esum;
  return res;
}

// Iterated adaptive quadrature over [ax, bx] x [ay, by]; f(x, y).
template <class F>
auto integrate2d(F&& f, double ax, double bx, double ay, double by, double rel_tol = 1e-9,
                 double abs_tol = 0.0) -> QuadResult<decltype(f(ax, ay))> {
  using T = decltype(f(ax, ay));
  QuadResult<T> out;
  std::size_t evals = 0;
  auto outer = [&](double x) {
    auto inner = integrate([&](double y) { return f(x, y); }, ay, by, rel_tol * 0.1, abs_tol * 0.1);
    evals += inner.evaluations;
    return inner.value;
  };
  auto r = integrate(outer, ax, bx, rel_tol, abs_tol);
  out.value = r.value;
  out.error = r.error;
  out.evaluations = evals;
  return out;
}

}  // namespace tdho
