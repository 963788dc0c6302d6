#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "jetcheck/expr.hpp"

namespace jetcheck {

/// One axis of a uniform sample grid: closed interval with endpoints included.
struct AxisDomain {
  std::string var;
  double lo = 0.0;
  double hi = 1.0;
  int samples = 2;

  double step() const { return (hi - lo) / (samples - 1); }
  double coord(int k) const { return k + 1 == samples ? hi : lo + k * step(); }
};

/// Region of the source manifold over which fields are reduced to scalar
/// reports: grids only reduce fields, all derivatives stay symbolic.
class ParamDomain {
public:
  explicit ParamDomain(std::vector<AxisDomain> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw ShapeError("domain needs at least one axis");
    for (const auto& a : axes_) {
      if (!(a.lo < a.hi))
        throw ShapeError("domain axis '" + a.var + "': lo must be < hi");
      if (a.samples < 2)
        throw ShapeError("domain axis '" + a.var + "': needs >= 2 samples");
    }
  }

  std::size_t dim() const { return axes_.size(); }
  const std::vector<AxisDomain>& axes() const { return axes_; }
  const AxisDomain& axis(std::size_t a) const { return axes_[a]; }

  std::size_t total_points() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= static_cast<std::size_t>(a.samples);
    return n;
  }

  std::vector<int> decode(std::size_t linear) const {
    std::vector<int> idx(axes_.size());
    for (std::size_t a = axes_.size(); a-- > 0;) {
      idx[a] = static_cast<int>(linear % axes_[a].samples);
      linear /= axes_[a].samples;
    }
    return idx;
  }

  Binding point(const std::vector<int>& idx) const {
    Binding b;
    for (std::size_t a = 0; a < axes_.size(); ++a) b[axes_[a].var] = axes_[a].coord(idx[a]);
    return b;
  }

  /// Trapezoid weight of a grid point: product over axes of h_a, halved at
  /// interval endpoints.
  double quad_weight(const std::vector<int>& idx) const {
    double w = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      w *= axes_[a].step();
      if (idx[a] == 0 || idx[a] + 1 == axes_[a].samples) w *= 0.5;
    }
    return w;
  }

  /// Same domain with one axis removed (for boundary-face quadrature).
  ParamDomain without_axis(std::size_t a) const {
    std::vector<AxisDomain> rest;
    for (std::size_t k = 0; k < axes_.size(); ++k)
      if (k != a) rest.push_back(axes_[k]);
    return ParamDomain(std::move(rest));
  }

private:
  std::vector<AxisDomain> axes_;
};

// ---------------------------------------------------------------------------
// Optional intra-sweep parallelism. Grid sweeps evaluate pure expressions,
// so splitting the index range is safe; partial results merge in chunk
// order to keep reports deterministic.

namespace detail {
inline std::atomic<bool>& parallel_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}
}  // namespace detail

inline void set_parallel_sweeps(bool enabled) { detail::parallel_flag() = enabled; }
inline bool parallel_sweeps_enabled() { return detail::parallel_flag(); }

namespace detail {

/// Runs fn(begin, end, chunk_index) over a split of [0, n); returns the
/// number of chunks used.
inline std::size_t run_chunked(std::size_t n,
                               const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  std::size_t chunks = 1;
  if (parallel_sweeps_enabled() && n >= 512) {
    const std::size_t hw = std::thread::hardware_concurrency();
    chunks = hw == 0 ? 4 : (hw > 8 ? 8 : hw);
  }
  if (chunks <= 1) {
    fn(0, n, 0);
    return 1;
  }
  std::vector<std::thread> pool;
  const std::size_t per = (n + chunks - 1) / chunks;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * per;
    const std::size_t e = std::min(n, b + per);
    if (b >= e) break;
    pool.emplace_back([=, &fn] { fn(b, e, c); });
  }
  for (auto& t : pool) t.join();
  return chunks;
}

}  // namespace detail

/// Grid maximum of |expression| together with where it was attained.
struct GridMax {
  double value = 0.0;
  Binding argmax;
};

/// Max over the grid and over a family of expressions of the absolute value.
inline GridMax grid_max_abs(std::span<const Expr> fields, const ParamDomain& domain) {
  const std::size_t n = domain.total_points();
  std::vector<GridMax> partial(9);
  detail::run_chunked(n, [&](std::size_t b, std::size_t e, std::size_t chunk) {
    GridMax local;
    local.value = -1.0;
    for (std::size_t lin = b; lin < e; ++lin) {
      const Binding pt = domain.point(domain.decode(lin));
      for (const Expr& f : fields) {
        const double v = std::abs(evaluate(f, pt));
        if (v > local.value) {
          local.value = v;
          local.argmax = pt;
        }
      }
    }
    partial[chunk] = local;
  });
  GridMax best;
  best.value = -1.0;
  for (const auto& p : partial)
    if (p.value > best.value) best = p;
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

inline GridMax grid_max_abs(const Expr& field, const ParamDomain& domain) {
  return grid_max_abs(std::span<const Expr>(&field, 1), domain);
}

/// Composite trapezoid quadrature over the full domain.
inline double integrate(const Expr& integrand, const ParamDomain& domain) {
  const std::size_t n = domain.total_points();
  std::vector<double> partial(9, 0.0);
  detail::run_chunked(n, [&](std::size_t b, std::size_t e, std::size_t chunk) {
    double acc = 0.0;
    for (std::size_t lin = b; lin < e; ++lin) {
      const auto idx = domain.decode(lin);
      acc += domain.quad_weight(idx) * evaluate(integrand, domain.point(idx));
    }
    partial[chunk] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// Trapezoid quadrature over the face {u^axis = lo or hi} with the remaining
/// axes as the induced grid. For a one-dimensional domain this is plain
/// evaluation at the endpoint.
inline double integrate_face(const Expr& integrand, const ParamDomain& domain,
                             std::size_t axis, bool at_hi) {
  const AxisDomain& ax = domain.axis(axis);
  const double fixed = at_hi ? ax.hi : ax.lo;
  if (domain.dim() == 1) {
    Binding b{{ax.var, fixed}};
    return evaluate(integrand, b);
  }
  const ParamDomain face = domain.without_axis(axis);
  const std::size_t n = face.total_points();
  double acc = 0.0;
  for (std::size_t lin = 0; lin < n; ++lin) {
    const auto idx = face.decode(lin);
    Binding b = face.point(idx);
    b[ax.var] = fixed;
    acc += face.quad_weight(idx) * evaluate(integrand, b);
  }
  return acc;
}

}  // namespace jetcheck
