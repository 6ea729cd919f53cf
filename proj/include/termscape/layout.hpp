#ifndef TERMSCAPE_LAYOUT_HPP
#define TERMSCAPE_LAYOUT_HPP

// VOS layout: place terms in the plane so that
//
//     V(x) = sum_{i<j} s_ij |x_i - x_j|^2
//
// is minimal subject to a mean pairwise distance D(x) of 1. The constrained
// problem is solved as the unconstrained minimization of V / D^2 (V is
// homogeneous of degree 2 and D of degree 1), after which the winner is
// rescaled to D = 1.
//
// Two step policies are available. Majorization minimizes
// f(x) = V(x) - sum_{i<j} |x_i - x_j| by repeatedly solving L x = B(y) y / 2,
// where L is the Laplacian of s and B(y) the Laplacian of 1/d(y). The update
// does not depend on the scale of y, and min over scale of f is
// -S^2 / (4 V), so every step is also a non-increasing step for V / D^2.
// Gradient descent works on V / D^2 directly with a halving line search.
//
// All arithmetic runs over terms in alphabetical order of their names, and
// starting points are seeded from a hash of each name, so relabeling the rows
// of the input permutes the output rows and nothing else.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "termscape/cooccur.hpp"
#include "termscape/error.hpp"
#include "termscape/json_io.hpp"
#include "termscape/random.hpp"

namespace termscape {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

inline double distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

enum class StepPolicy { majorization, gradient };

inline std::string_view step_policy_name(StepPolicy p) {
  return p == StepPolicy::majorization ? "majorization" : "gradient";
}

inline StepPolicy parse_step_policy(std::string_view name) {
  if (name == "majorization") return StepPolicy::majorization;
  if (name == "gradient") return StepPolicy::gradient;
  throw ConfigError("unknown step policy '" + std::string(name) + "'");
}

struct IterationRecord {
  std::size_t component = 0;
  int restart = 0;
  int iteration = 0;  // 0 is the starting configuration
  double ratio = 0.0;  // V / D^2 on internally normalized similarities
};

struct LayoutParams {
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iters = 1000;
  double tol = 1e-7;
  StepPolicy step = StepPolicy::majorization;
  double initial_step = 0.1;  // gradient policy only
  std::function<void(const IterationRecord&)> observer;
};

struct Positions {
  std::vector<std::string> terms;
  std::vector<Point> coords;
  std::vector<bool> isolated;
  double objective = 0.0;
  double constraint_residual = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

inline void validate(const LayoutParams& params) {
  if (params.restarts < 1) throw ConfigError("restarts must be >= 1");
  if (params.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(params.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(params.initial_step > 0.0)) throw ConfigError("initial_step must be > 0");
}

// Thrown when an iteration increases V / D^2 beyond rounding noise.
class DescentViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

inline double vos_objective(std::span<const Point> coords, const SimilarityMatrix& sim) {
  if (coords.size() != sim.n()) {
    throw std::invalid_argument("vos_objective: " + std::to_string(coords.size()) +
                                " coordinates for " + std::to_string(sim.n()) + " terms");
  }
  double v = 0.0;
  for (const auto& e : sim.entries) {
    const double dx = coords[e.i].x - coords[e.j].x;
    const double dy = coords[e.i].y - coords[e.j].y;
    v += e.value * (dx * dx + dy * dy);
  }
  return v;
}

inline double mean_distance(std::span<const Point> coords) {
  const std::size_t n = coords.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += distance(coords[i], coords[j]);
  }
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

namespace detail {

struct Edge {
  std::uint32_t i, j;
  double w;
};

struct RestartResult {
  std::vector<Point> coords;
  double ratio = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// One connected component, indices in alphabetical order of names.
class VosSolver {
public:
  VosSolver(std::vector<std::string> names, std::vector<Edge> edges, const LayoutParams& params,
            std::size_t component)
      : names_(std::move(names)), edges_(std::move(edges)), params_(params), component_(component) {
    m_ = names_.size();
    // rescale weights by a power of two (exact) so the largest is in [0.5, 1)
    double max_w = 0.0;
    for (const auto& e : edges_) max_w = std::max(max_w, e.w);
    int exponent = 0;
    std::frexp(max_w, &exponent);
    for (auto& e : edges_) e.w = std::ldexp(e.w, -exponent);
    hashes_.reserve(m_);
    for (const auto& name : names_) hashes_.push_back(hash64(name));
    if (params_.step == StepPolicy::majorization) factorize();
  }

  RestartResult run(int restart) const {
    RestartResult result;
    std::vector<Point> x = initial(static_cast<std::uint64_t>(restart));
    if (sum_distances(x) == 0.0) x = initial(static_cast<std::uint64_t>(restart) + 1000);
    if (sum_distances(x) == 0.0) throw StageError("layout start has all points coincident");
    return params_.step == StepPolicy::majorization ? majorize(std::move(x), restart)
                                                    : descend(std::move(x), restart);
  }

private:
  std::vector<Point> initial(std::uint64_t restart) const {
    std::vector<Point> x(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      SplitMix64 rng(hashes_[i] ^ params_.seed ^ restart);
      x[i].x = rng.uniform01() - 0.5;
      x[i].y = rng.uniform01() - 0.5;
    }
    return x;
  }

  double energy(const std::vector<Point>& x) const {
    double v = 0.0;
    for (const auto& e : edges_) {
      const double dx = x[e.i].x - x[e.j].x;
      const double dy = x[e.i].y - x[e.j].y;
      v += e.w * (dx * dx + dy * dy);
    }
    return v;
  }

  double sum_distances(const std::vector<Point>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = i + 1; j < m_; ++j) s += distance(x[i], x[j]);
    }
    return s;
  }

  // Sum of distances and its gradient, sum_j (x_i - x_j) / d_ij.
  double distance_gradient(const std::vector<Point>& x, std::vector<Point>& grad) const {
    grad.assign(m_, Point{});
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const Point xi = x[i];
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = i + 1; j < m_; ++j) {
        const double dx = xi.x - x[j].x;
        const double dy = xi.y - x[j].y;
        const double d = std::sqrt(dx * dx + dy * dy);
        s += d;
        if (d > 0.0) {
          const double ux = dx / d, uy = dy / d;
          gx += ux;
          gy += uy;
          grad[j].x -= ux;
          grad[j].y -= uy;
        }
      }
      grad[i].x += gx;
      grad[i].y += gy;
    }
    return s;
  }

  double ratio(double v, double s) const {
    const double pairs = static_cast<double>(m_) * static_cast<double>(m_ - 1) / 2.0;
    const double d = s / pairs;
    return v / (d * d);
  }

  void report(int restart, int iteration, double r) const {
    if (params_.observer) params_.observer({component_, restart, iteration, r});
  }

  // Returns true when the run should stop. Reverts to the previous iterate if
  // the new one is worse by rounding noise only.
  bool accept(double previous, double& current, std::vector<Point>& x, std::vector<Point>& x_prev,
              int restart, int iteration) const {
    constexpr double kNoise = 64.0 * std::numeric_limits<double>::epsilon();
    if (current > previous * (1.0 + kNoise)) {
      throw DescentViolation("layout objective increased from " + format_double(previous) + " to " +
                             format_double(current) + " at iteration " + std::to_string(iteration));
    }
    if (current > previous) {
      x.swap(x_prev);
      current = previous;
    }
    report(restart, iteration, current);
    return (previous - current) <= params_.tol * previous;
  }

  void factorize() {
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_),
                                                  1.0 / static_cast<double>(m_));
    for (const auto& e : edges_) {
      a(e.i, e.j) -= e.w;
      a(e.j, e.i) -= e.w;
      a(e.i, e.i) += e.w;
      a(e.j, e.j) += e.w;
    }
    llt_.compute(a);
    if (llt_.info() != Eigen::Success) throw StageError("layout: similarity Laplacian is not positive definite");
  }

  RestartResult majorize(std::vector<Point> x, int restart) const {
    RestartResult result;
    std::vector<Point> grad, x_prev;
    double s = distance_gradient(x, grad);
    double current = ratio(energy(x), s);
    report(restart, 0, current);
    Eigen::MatrixXd rhs(static_cast<Eigen::Index>(m_), 2);
    for (int it = 1; it <= params_.max_iters; ++it) {
      for (std::size_t i = 0; i < m_; ++i) {
        rhs(static_cast<Eigen::Index>(i), 0) = 0.5 * grad[i].x;
        rhs(static_cast<Eigen::Index>(i), 1) = 0.5 * grad[i].y;
      }
      const Eigen::MatrixXd next = llt_.solve(rhs);
      x_prev = x;
      for (std::size_t i = 0; i < m_; ++i) {
        x[i] = {next(static_cast<Eigen::Index>(i), 0), next(static_cast<Eigen::Index>(i), 1)};
      }
      s = distance_gradient(x, grad);
      const double previous = current;
      current = ratio(energy(x), s);
      result.iterations = it;
      if (accept(previous, current, x, x_prev, restart, it)) {
        result.converged = true;
        break;
      }
    }
    result.coords = std::move(x);
    result.ratio = current;
    return result;
  }

  RestartResult descend(std::vector<Point> x, int restart) const {
    RestartResult result;
    std::vector<Point> dgrad, trial;
    std::vector<Point> x_prev;
    const double pairs = static_cast<double>(m_) * static_cast<double>(m_ - 1) / 2.0;
    double current = ratio(energy(x), sum_distances(x));
    report(restart, 0, current);
    for (int it = 1; it <= params_.max_iters; ++it) {
      // work at unit mean distance so the step length has a fixed meaning
      const double scale = sum_distances(x) / pairs;
      for (auto& p : x) p = {p.x / scale, p.y / scale};
      const double v = energy(x);
      const double s = distance_gradient(x, dgrad);
      const double d = s / pairs;
      // grad(V / D^2) = grad V / D^2 - 2 V grad D / D^3
      std::vector<Point> g(m_);
      for (const auto& e : edges_) {
        const double gx = 2.0 * e.w * (x[e.i].x - x[e.j].x);
        const double gy = 2.0 * e.w * (x[e.i].y - x[e.j].y);
        g[e.i].x += gx;
        g[e.i].y += gy;
        g[e.j].x -= gx;
        g[e.j].y -= gy;
      }
      const double c1 = 1.0 / (d * d);
      const double c2 = 2.0 * v / (d * d * d * pairs);
      for (std::size_t i = 0; i < m_; ++i) {
        g[i].x = c1 * g[i].x - c2 * dgrad[i].x;
        g[i].y = c1 * g[i].y - c2 * dgrad[i].y;
      }
      const double previous = current;
      double step = params_.initial_step;
      bool moved = false;
      for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
        trial = x;
        for (std::size_t i = 0; i < m_; ++i) {
          trial[i].x -= step * g[i].x;
          trial[i].y -= step * g[i].y;
        }
        const double st = sum_distances(trial);
        if (st == 0.0) continue;
        const double r = ratio(energy(trial), st);
        if (r < previous) {
          x_prev = x;
          x.swap(trial);
          current = r;
          moved = true;
          break;
        }
      }
      result.iterations = it;
      if (!moved) {
        report(restart, it, current);
        result.converged = true;
        break;
      }
      if (accept(previous, current, x, x_prev, restart, it)) {
        result.converged = true;
        break;
      }
    }
    result.coords = std::move(x);
    result.ratio = current;
    return result;
  }

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  const LayoutParams& params_;
  std::size_t component_;
  std::size_t m_ = 0;
  std::vector<std::uint64_t> hashes_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline std::vector<std::size_t> name_order(const std::vector<std::string>& names) {
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
  return order;
}

struct Frame {
  Point center;
  double cos_t = 1.0;
  double sin_t = 0.0;
};

// Centroid and principal-axis rotation of the selected points (summed in the
// given order).
inline Frame principal_frame(const std::vector<Point>& pts, const std::vector<std::size_t>& idx) {
  Frame f;
  for (auto i : idx) {
    f.center.x += pts[i].x;
    f.center.y += pts[i].y;
  }
  f.center.x /= static_cast<double>(idx.size());
  f.center.y /= static_cast<double>(idx.size());
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (auto i : idx) {
    const double dx = pts[i].x - f.center.x;
    const double dy = pts[i].y - f.center.y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  f.cos_t = std::cos(theta);
  f.sin_t = std::sin(theta);
  return f;
}

// Rotates by -theta about the frame center and translates it to the origin.
inline Point to_frame(const Frame& f, Point p) {
  const double dx = p.x - f.center.x;
  const double dy = p.y - f.center.y;
  return {f.cos_t * dx + f.sin_t * dy, -f.sin_t * dx + f.cos_t * dy};
}

inline bool is_isotropic(const std::vector<Point>& pts, const std::vector<std::size_t>& idx) {
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (auto i : idx) {
    sxx += pts[i].x * pts[i].x;
    syy += pts[i].y * pts[i].y;
    sxy += pts[i].x * pts[i].y;
  }
  const double scale = sxx + syy;
  return std::hypot(sxx - syy, 2.0 * sxy) <= 1e-9 * scale;
}

}  // namespace detail

// Optimizes every connected component of two or more terms. Components are
// laid out independently, centered, turned to their principal axis and placed
// left to right by descending size with gaps of 0.5. Terms without any
// similarity are flagged isolated and left at the origin for place_isolated.
inline Positions optimize_layout(const SimilarityMatrix& sim, const LayoutParams& params) {
  const std::size_t n = sim.n();
  if (n < 2) throw StageError("layout needs at least 2 terms, got " + std::to_string(n));
  validate(params);
  for (const auto& e : sim.entries) {
    if (e.i >= e.j || e.j >= n) throw std::invalid_argument("similarity entry outside the upper triangle");
    if (!(e.value > 0.0) || !std::isfinite(e.value)) {
      throw std::invalid_argument("similarity entries must be positive and finite");
    }
  }
  if (sim.entries.empty()) throw StageError("layout: all similarities are zero");

  // union-find over terms
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& e : sim.entries) {
    const auto a = find(e.i), b = find(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  const auto order = detail::name_order(sim.terms);
  std::vector<std::vector<std::size_t>> groups;  // members in name order
  std::vector<std::size_t> group_of_root(n, SIZE_MAX);
  for (auto i : order) {
    const auto r = find(i);
    if (group_of_root[r] == SIZE_MAX) {
      group_of_root[r] = groups.size();
      groups.emplace_back();
    }
    groups[group_of_root[r]].push_back(i);
  }
  // groups were opened in name order of their first member; stable sort by size
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  Positions out;
  out.terms = sim.terms;
  out.coords.assign(n, Point{});
  out.isolated.assign(n, true);
  out.converged = true;

  std::vector<std::size_t> local(n, SIZE_MAX);
  double cursor = 0.0;
  bool first_component = true;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& members = groups[g];
    if (members.size() < 2) continue;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < members.size(); ++k) {
      local[members[k]] = k;
      names.push_back(sim.terms[members[k]]);
    }
    std::vector<detail::Edge> edges;
    for (const auto& e : sim.entries) {
      if (find(e.i) != find(members.front())) continue;
      auto a = static_cast<std::uint32_t>(local[e.i]);
      auto b = static_cast<std::uint32_t>(local[e.j]);
      if (a > b) std::swap(a, b);
      edges.push_back({a, b, e.value});
    }
    std::sort(edges.begin(), edges.end(),
              [](const detail::Edge& p, const detail::Edge& q) { return p.i != q.i ? p.i < q.i : p.j < q.j; });

    detail::VosSolver solver(std::move(names), std::move(edges), params, g);
    detail::RestartResult best;
    for (int r = 0; r < params.restarts; ++r) {
      auto result = solver.run(r);
      if (result.ratio < best.ratio) best = std::move(result);
    }

    const double d = mean_distance(best.coords);
    for (auto& p : best.coords) p = {p.x / d, p.y / d};
    out.constraint_residual = std::max(out.constraint_residual, std::abs(mean_distance(best.coords) - 1.0));
    out.iterations_used = std::max(out.iterations_used, best.iterations);
    out.converged = out.converged && best.converged;

    std::vector<std::size_t> all(best.coords.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto frame = detail::principal_frame(best.coords, all);
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -min_x;
    for (auto& p : best.coords) {
      p = detail::to_frame(frame, p);
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
    }
    const double shift = first_component ? 0.0 : cursor + 0.5 - min_x;
    cursor = (first_component ? max_x : cursor + 0.5 + (max_x - min_x));
    first_component = false;
    for (std::size_t k = 0; k < members.size(); ++k) {
      out.coords[members[k]] = {best.coords[k].x + shift, best.coords[k].y};
      out.isolated[members[k]] = false;
    }
  }
  out.objective = vos_objective(out.coords, sim);
  return out;
}

// Centroid to the origin, first principal axis horizontal, then reflections
// so that the highest-occurrence term has x >= 0 and the next one off the
// x axis has y >= 0 (occurrence ties go to the alphabetically first term).
// Isolated terms are ignored and left untouched.
inline Positions canonicalize(Positions pos, std::span<const std::int64_t> occ) {
  const std::size_t n = pos.coords.size();
  if (occ.size() != n) throw std::invalid_argument("canonicalize: occurrence vector size mismatch");
  std::vector<std::size_t> idx;
  for (auto i : detail::name_order(pos.terms)) {
    if (!pos.isolated.empty() && pos.isolated[i]) continue;
    idx.push_back(i);
  }
  if (idx.size() < 2) throw StageError("canonicalize needs at least 2 placed terms");

  double spread = 0.0;
  for (auto i : idx) spread = std::max(spread, distance(pos.coords[i], pos.coords[idx.front()]));
  if (!(spread > 0.0)) throw StageError("canonicalize: all points coincide");
  const double eps = 1e-12 * spread;

  std::vector<std::size_t> by_occ = idx;
  std::stable_sort(by_occ.begin(), by_occ.end(), [&](std::size_t a, std::size_t b) { return occ[a] > occ[b]; });

  const auto frame = detail::principal_frame(pos.coords, idx);
  for (auto i : idx) pos.coords[i] = detail::to_frame(frame, pos.coords[i]);

  if (detail::is_isotropic(pos.coords, idx)) {
    // no principal axis: turn the leading term onto the +x axis instead
    for (auto a : by_occ) {
      const Point p = pos.coords[a];
      const double r = std::hypot(p.x, p.y);
      if (r <= eps) continue;
      const double c = p.x / r, s = p.y / r;
      for (auto i : idx) {
        const Point q = pos.coords[i];
        pos.coords[i] = {c * q.x + s * q.y, -s * q.x + c * q.y};
      }
      break;
    }
  }

  std::size_t x_anchor = SIZE_MAX;
  for (auto a : by_occ) {
    if (std::abs(pos.coords[a].x) > eps) {
      x_anchor = a;
      if (pos.coords[a].x < 0.0) {
        for (auto i : idx) pos.coords[i].x = -pos.coords[i].x;
      }
      break;
    }
  }
  for (auto a : by_occ) {
    if (a == x_anchor) continue;
    if (std::abs(pos.coords[a].y) > eps) {
      if (pos.coords[a].y < 0.0) {
        for (auto i : idx) pos.coords[i].y = -pos.coords[i].y;
      }
      break;
    }
  }
  for (auto i : idx) {
    // clear rounding residue around exact zero
    if (pos.coords[i].x == 0.0) pos.coords[i].x = 0.0;
    if (pos.coords[i].y == 0.0) pos.coords[i].y = 0.0;
  }
  return pos;
}

// Puts the given terms on a ring of radius 1.2 * (largest distance of a placed
// term from the placed terms' centroid), alphabetically, equally spaced and
// starting on the +x axis.
inline Positions place_isolated(Positions pos, const std::vector<std::size_t>& isolated) {
  if (isolated.empty()) return pos;
  const std::size_t n = pos.coords.size();
  if (pos.isolated.empty()) pos.isolated.assign(n, false);
  std::vector<bool> flagged(n, false);
  for (auto i : isolated) {
    if (i >= n) throw std::invalid_argument("place_isolated: index out of range");
    flagged[i] = true;
  }
  std::vector<std::size_t> placed;
  for (auto i : detail::name_order(pos.terms)) {
    if (!flagged[i]) placed.push_back(i);
  }
  Point center;
  double radius = 0.0;
  if (!placed.empty()) {
    for (auto i : placed) {
      center.x += pos.coords[i].x;
      center.y += pos.coords[i].y;
    }
    center.x /= static_cast<double>(placed.size());
    center.y /= static_cast<double>(placed.size());
    for (auto i : placed) radius = std::max(radius, distance(pos.coords[i], center));
  }
  if (!(radius > 0.0)) radius = 1.0;
  radius *= 1.2;

  std::vector<std::size_t> ring;
  for (auto i : detail::name_order(pos.terms)) {
    if (flagged[i]) ring.push_back(i);
  }
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const double angle = 2.0 * pi * static_cast<double>(k) / static_cast<double>(ring.size());
    pos.coords[ring[k]] = {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
    pos.isolated[ring[k]] = true;
  }
  return pos;
}

// optimize_layout, canonicalize and place_isolated in sequence.
inline Positions compute_layout(const SimilarityMatrix& sim, std::span<const std::int64_t> occ,
                                const LayoutParams& params) {
  auto pos = canonicalize(optimize_layout(sim, params), occ);
  std::vector<std::size_t> iso;
  for (std::size_t i = 0; i < pos.isolated.size(); ++i) {
    if (pos.isolated[i]) iso.push_back(i);
  }
  return place_isolated(std::move(pos), iso);
}

// ---------------------------------------------------------------------------

inline constexpr const char* kLayoutSchema = "layout/1";

inline json layout_to_json(const Positions& pos, const LayoutParams& params) {
  json terms = json::array();
  for (auto i : detail::name_order(pos.terms)) {
    terms.push_back({{"term", pos.terms[i]},
                     {"x", pos.coords[i].x},
                     {"y", pos.coords[i].y},
                     {"isolated", !pos.isolated.empty() && pos.isolated[i]}});
  }
  return json{{"schema", kLayoutSchema},
              {"terms", terms},
              {"objective", pos.objective},
              {"constraint_residual", pos.constraint_residual},
              {"seed", params.seed},
              {"restarts", params.restarts},
              {"max_iters", params.max_iters},
              {"tol", params.tol},
              {"step_policy", step_policy_name(params.step)},
              {"iterations_used", pos.iterations_used},
              {"converged", pos.converged}};
}

inline Positions layout_from_json(const json& doc, const std::string& what) {
  check_schema(doc, kLayoutSchema, what);
  Positions pos;
  try {
    for (const auto& t : doc.at("terms")) {
      pos.terms.push_back(t.at("term").get<std::string>());
      pos.coords.push_back({t.at("x").get<double>(), t.at("y").get<double>()});
      pos.isolated.push_back(t.at("isolated").get<bool>());
    }
    pos.objective = doc.at("objective").get<double>();
    pos.constraint_residual = doc.at("constraint_residual").get<double>();
    pos.iterations_used = doc.at("iterations_used").get<int>();
    pos.converged = doc.at("converged").get<bool>();
  } catch (const json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  return pos;
}

}  // namespace termscape

#endif
