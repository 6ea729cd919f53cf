#include <gtest/gtest.h>

#include "support.hpp"

namespace ts = termscape;
using namespace testing_support;

namespace {

const double kPi = std::acos(-1.0);

std::vector<std::int64_t> unit_occ(std::size_t n) { return std::vector<std::int64_t>(n, 1); }

std::vector<std::int64_t> random_occ(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::int64_t> occ(n);
  for (auto& o : occ) o = 1 + static_cast<std::int64_t>(rng() % 50);
  return occ;
}

ts::SimilarityMatrix scaled(ts::SimilarityMatrix s, double lambda) {
  for (auto& e : s.entries) e.value *= lambda;
  return s;
}

// Row k of the result is row perm[k] of the input.
ts::SimilarityMatrix permuted(const ts::SimilarityMatrix& s, const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> where(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) where[perm[k]] = k;
  std::vector<std::string> names;
  for (auto p : perm) names.push_back(s.terms[p]);
  std::vector<std::tuple<int, int, double>> triples;
  for (const auto& e : s.entries) triples.emplace_back(static_cast<int>(where[e.i]), static_cast<int>(where[e.j]), e.value);
  return make_sim(names, triples);
}

ts::Point rotate(ts::Point p, double angle) {
  return {std::cos(angle) * p.x - std::sin(angle) * p.y, std::sin(angle) * p.x + std::cos(angle) * p.y};
}

ts::Positions bare_positions(std::vector<ts::Point> pts) {
  ts::Positions pos;
  for (std::size_t i = 0; i < pts.size(); ++i) pos.terms.push_back("p" + std::to_string(i));
  pos.coords = std::move(pts);
  pos.isolated.assign(pos.coords.size(), false);
  return pos;
}

// V / D^2 on a dense matrix, for the grid oracle.
double brute_ratio(const std::vector<ts::Point>& x, const std::vector<std::vector<double>>& s) {
  const double d = brute_mean_distance(x);
  return d > 0.0 ? brute_objective(x, s) / (d * d) : std::numeric_limits<double>::infinity();
}

}  // namespace

TEST(VosObjective, SpecExamples) {
  const auto s = make_sim({"a", "b"}, {{0, 1, 0.5}});
  EXPECT_EQ(ts::vos_objective(std::vector<ts::Point>{{1, 1}, {1, 1}}, s), 0.0);
  EXPECT_DOUBLE_EQ(ts::vos_objective(std::vector<ts::Point>{{0, 0}, {3, 4}}, s), 0.5 * 25.0);
  EXPECT_THROW(ts::vos_objective(std::vector<ts::Point>{{0, 0}}, s), std::invalid_argument);

  const auto s3 = make_sim({"a", "b", "c"}, {{0, 1, 0.3}, {0, 2, 1.7}, {1, 2, 0.25}});
  const std::vector<ts::Point> x = {{0.1, -0.4}, {1.3, 0.2}, {-0.7, 0.9}};
  EXPECT_NEAR(ts::vos_objective(x, s3), brute_objective(x, dense(s3)), 1e-15);
  EXPECT_NEAR(ts::mean_distance(x), brute_mean_distance(x), 1e-15);
}

TEST(OptimizeLayout, TwoTermsEndAtUnitDistance) {
  for (double w : {1e-6, 0.5, 3.0, 1e4}) {
    const auto pos = ts::optimize_layout(make_sim({"x", "y"}, {{0, 1, w}}), quick_params());
    EXPECT_NEAR(ts::distance(pos.coords[0], pos.coords[1]), 1.0, 1e-6);
    EXPECT_TRUE(pos.converged);
  }
}

TEST(OptimizeLayout, EqualTriangleIsEquilateral) {
  for (auto policy : {ts::StepPolicy::majorization, ts::StepPolicy::gradient}) {
    auto params = quick_params(11);
    params.step = policy;
    const auto pos = ts::optimize_layout(make_sim({"a", "b", "c"}, {{0, 1, 0.4}, {0, 2, 0.4}, {1, 2, 0.4}}), params);
    EXPECT_NEAR(ts::distance(pos.coords[0], pos.coords[1]), 1.0, 1e-3);
    EXPECT_NEAR(ts::distance(pos.coords[0], pos.coords[2]), 1.0, 1e-3);
    EXPECT_NEAR(ts::distance(pos.coords[1], pos.coords[2]), 1.0, 1e-3);
  }
}

TEST(OptimizeLayout, TwoTightPairsAgreeWithGridSearch) {
  const auto sim = make_sim({"a1", "a2", "b1", "b2"},
                            {{0, 1, 1.0}, {2, 3, 1.0}, {0, 2, 0.01}, {0, 3, 0.01}, {1, 2, 0.01}, {1, 3, 0.01}});
  const auto s = dense(sim);

  // exhaustive search over a coarse grid, first point pinned at the origin
  std::vector<ts::Point> grid;
  for (int gx = -6; gx <= 6; ++gx) {
    for (int gy = -6; gy <= 6; ++gy) grid.push_back({gx / 6.0, gy / 6.0});
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<ts::Point> best_x;
  for (const auto& p1 : grid) {
    for (const auto& p2 : grid) {
      for (const auto& p3 : grid) {
        const std::vector<ts::Point> x = {{0, 0}, p1, p2, p3};
        const double r = brute_ratio(x, s);
        if (r < best) {
          best = r;
          best_x = x;
        }
      }
    }
  }
  const auto within = [](const std::vector<ts::Point>& x) {
    return std::max(ts::distance(x[0], x[1]), ts::distance(x[2], x[3]));
  };
  const auto across = [](const std::vector<ts::Point>& x) {
    return std::min({ts::distance(x[0], x[2]), ts::distance(x[0], x[3]), ts::distance(x[1], x[2]),
                     ts::distance(x[1], x[3])});
  };
  ASSERT_LT(within(best_x), across(best_x));

  for (auto policy : {ts::StepPolicy::majorization, ts::StepPolicy::gradient}) {
    auto params = quick_params(5);
    params.step = policy;
    const auto pos = ts::optimize_layout(sim, params);
    EXPECT_LT(within(pos.coords), across(pos.coords));
    // the continuous optimum is at least as good as the best grid point
    EXPECT_LE(brute_ratio(pos.coords, s), best * (1.0 + 1e-9));
  }
}

TEST(OptimizeLayout, ConstraintAndObjectiveBookkeeping) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sim = random_sim(rng, 2 + static_cast<int>(rng() % 15));
    const auto pos = ts::optimize_layout(sim, quick_params(trial));
    EXPECT_LE(std::abs(ts::mean_distance(pos.coords) - 1.0), 1e-9);
    EXPECT_LE(pos.constraint_residual, 1e-9);
    EXPECT_NEAR(pos.objective, brute_objective(pos.coords, dense(sim)), 1e-12 * std::max(1.0, pos.objective));
    EXPECT_TRUE(pos.converged);
  }
}

TEST(OptimizeLayout, MonotoneDescentOnRandomInstances) {
  std::mt19937_64 rng(71);
  for (auto policy : {ts::StepPolicy::majorization, ts::StepPolicy::gradient}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto sim = random_sim(rng, 2 + static_cast<int>(rng() % 12));
      std::map<std::pair<std::size_t, int>, std::vector<double>> trace;
      auto params = quick_params(rng());
      params.step = policy;
      params.restarts = 2;
      params.observer = [&](const ts::IterationRecord& r) { trace[{r.component, r.restart}].push_back(r.ratio); };
      ASSERT_NO_THROW(ts::optimize_layout(sim, params));
      for (const auto& [key, ratios] : trace) {
        for (std::size_t k = 1; k < ratios.size(); ++k) ASSERT_LE(ratios[k], ratios[k - 1]);
      }
    }
  }
}

TEST(OptimizeLayout, Preconditions) {
  EXPECT_THROW(ts::optimize_layout(make_sim({"a"}, {}), quick_params()), ts::StageError);
  EXPECT_THROW(ts::optimize_layout(make_sim({"a", "b"}, {}), quick_params()), ts::StageError);
  auto params = quick_params();
  params.restarts = 0;
  EXPECT_THROW(ts::optimize_layout(make_sim({"a", "b"}, {{0, 1, 1.0}}), params), ts::ConfigError);
  params = quick_params();
  params.tol = 0.0;
  EXPECT_THROW(ts::optimize_layout(make_sim({"a", "b"}, {{0, 1, 1.0}}), params), ts::ConfigError);
}

TEST(OptimizeLayout, ComponentsLeftToRight) {
  // a triangle, a pair and a singleton
  const auto sim = make_sim({"a", "b", "c", "d", "e", "f"}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 2.0}});
  const auto pos = ts::optimize_layout(sim, quick_params());
  EXPECT_EQ(pos.isolated, (std::vector<bool>{false, false, false, false, false, true}));
  double tri_max = -1e300;
  for (int i = 0; i < 3; ++i) tri_max = std::max(tri_max, pos.coords[i].x);
  EXPECT_NEAR(std::min(pos.coords[3].x, pos.coords[4].x) - tri_max, 0.5, 1e-12);
  // each component individually at unit mean distance
  EXPECT_NEAR(ts::distance(pos.coords[3], pos.coords[4]), 1.0, 1e-9);
  EXPECT_NEAR(ts::mean_distance(std::vector<ts::Point>(pos.coords.begin(), pos.coords.begin() + 3)), 1.0, 1e-9);
}

TEST(Layout, DeterministicAcrossRuns) {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sim = random_sim(rng, 3 + static_cast<int>(rng() % 20));
    const auto occ = random_occ(rng, sim.n());
    const auto a = ts::compute_layout(sim, occ, quick_params(trial));
    const auto b = ts::compute_layout(sim, occ, quick_params(trial));
    EXPECT_EQ(a.coords, b.coords);
    EXPECT_EQ(ts::canonical_json(ts::layout_to_json(a, quick_params(trial))),
              ts::canonical_json(ts::layout_to_json(b, quick_params(trial))));
  }
}

TEST(Layout, GlobalSimilarityScaleInvariance) {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sim = random_sim(rng, 3 + static_cast<int>(rng() % 20));
    const auto occ = random_occ(rng, sim.n());
    const auto base = ts::compute_layout(sim, occ, quick_params(trial));
    for (double lambda : {0.01, 1.0, 100.0}) {
      const auto other = ts::compute_layout(scaled(sim, lambda), occ, quick_params(trial));
      for (std::size_t i = 0; i < sim.n(); ++i) {
        EXPECT_NEAR(other.coords[i].x, base.coords[i].x, 1e-9) << "lambda " << lambda;
        EXPECT_NEAR(other.coords[i].y, base.coords[i].y, 1e-9) << "lambda " << lambda;
      }
    }
  }
}

TEST(Layout, RigidMotionsPreserveObjectiveAndMeanDistance) {
  std::mt19937_64 rng(92);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sim = random_sim(rng, 2 + static_cast<int>(rng() % 20));
    std::vector<ts::Point> x(sim.n());
    for (auto& p : x) p = {u(rng), u(rng)};
    const double angle = kPi * u(rng);
    const ts::Point shift{5.0 * u(rng), 5.0 * u(rng)};
    std::vector<ts::Point> moved;
    for (const auto& p : x) {
      const auto r = rotate(p, angle);
      moved.push_back({r.x + shift.x, r.y + shift.y});
    }
    EXPECT_NEAR(ts::vos_objective(moved, sim), ts::vos_objective(x, sim), 1e-10);
    EXPECT_NEAR(ts::mean_distance(moved), ts::mean_distance(x), 1e-10);
  }
}

TEST(Layout, RelabelingPermutesRowsExactly) {
  std::mt19937_64 rng(93);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sim = random_sim(rng, 3 + static_cast<int>(rng() % 20));
    const auto occ = random_occ(rng, sim.n());
    std::vector<std::size_t> perm(sim.n());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::int64_t> occ_perm;
    for (auto p : perm) occ_perm.push_back(occ[p]);

    const auto base = ts::compute_layout(sim, occ, quick_params(trial));
    const auto other = ts::compute_layout(permuted(sim, perm), occ_perm, quick_params(trial));
    for (std::size_t k = 0; k < perm.size(); ++k) {
      EXPECT_EQ(other.terms[k], base.terms[perm[k]]);
      EXPECT_EQ(other.coords[k], base.coords[perm[k]]);
    }
  }
}

TEST(Canonicalize, CentroidAxisAndDistances) {
  std::mt19937_64 rng(94);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    std::vector<ts::Point> pts(n);
    for (auto& p : pts) p = {u(rng) + 3.0, 0.3 * u(rng) - 1.0};
    const auto occ = random_occ(rng, n);
    const auto out = ts::canonicalize(bare_positions(pts), occ);
    double cx = 0.0, cy = 0.0, sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& p : out.coords) {
      cx += p.x;
      cy += p.y;
      sxy += p.x * p.y;
      sxx += p.x * p.x;
      syy += p.y * p.y;
    }
    EXPECT_NEAR(cx / n, 0.0, 1e-12);
    EXPECT_NEAR(cy / n, 0.0, 1e-12);
    EXPECT_NEAR(sxy, 0.0, 1e-12 * (sxx + syy));
    EXPECT_GE(sxx, syy);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        EXPECT_NEAR(ts::distance(out.coords[i], out.coords[j]), ts::distance(pts[i], pts[j]), 1e-12);
      }
    }
    // reflection anchors
    std::size_t top = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (occ[i] > occ[top] || (occ[i] == occ[top] && out.terms[i] < out.terms[top])) top = i;
    }
    EXPECT_GE(out.coords[top].x, 0.0);
  }
}

TEST(Canonicalize, RigidMotionsGiveIdenticalOutput) {
  std::mt19937_64 rng(95);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 15;
    std::vector<ts::Point> pts(n);
    for (auto& p : pts) p = {u(rng), 0.5 * u(rng)};
    const auto occ = random_occ(rng, n);
    const auto ref = ts::canonicalize(bare_positions(pts), occ);
    const double angle = kPi * u(rng);
    const ts::Point shift{10.0 * u(rng), 10.0 * u(rng)};
    std::vector<ts::Point> moved;
    for (const auto& p : pts) {
      const auto r = rotate(p, angle);
      moved.push_back({r.x + shift.x, r.y + shift.y});
    }
    const auto out = ts::canonicalize(bare_positions(moved), occ);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(out.coords[i].x, ref.coords[i].x, 1e-9);
      EXPECT_NEAR(out.coords[i].y, ref.coords[i].y, 1e-9);
    }
  }
}

TEST(Canonicalize, HandBuiltCloudRotated37Degrees) {
  const std::vector<ts::Point> cloud = {{-2.0, 0.0}, {1.0, 1.0}, {1.0, -0.5}};
  const std::vector<std::int64_t> occ = {5, 3, 1};
  // rotation by 37 degrees written out with its matrix entries
  const double c = std::cos(37.0 * kPi / 180.0), s = std::sin(37.0 * kPi / 180.0);
  std::vector<ts::Point> turned;
  for (const auto& p : cloud) turned.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
  const auto a = ts::canonicalize(bare_positions(cloud), occ);
  const auto b = ts::canonicalize(bare_positions(turned), occ);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_NEAR(a.coords[i].x, b.coords[i].x, 1e-12);
    EXPECT_NEAR(a.coords[i].y, b.coords[i].y, 1e-12);
  }
  EXPECT_GT(a.coords[0].x, 0.0);  // highest occurrence on the right
  EXPECT_GE(a.coords[1].y, 0.0);
}

TEST(Canonicalize, Degenerate) {
  EXPECT_THROW(ts::canonicalize(bare_positions({{1, 1}, {1, 1}}), std::vector<std::int64_t>{1, 1}), ts::StageError);
  EXPECT_THROW(ts::canonicalize(bare_positions({{1, 1}, {2, 1}}), std::vector<std::int64_t>{1}),
               std::invalid_argument);
  // a square has no principal axis; the leading term goes to +x
  const auto sq = ts::canonicalize(bare_positions({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}),
                                   std::vector<std::int64_t>{1, 9, 1, 1});
  EXPECT_NEAR(sq.coords[1].x, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(sq.coords[1].y, 0.0, 1e-12);
}

TEST(PlaceIsolated, SpecExamples) {
  auto base = bare_positions({{-2, 0}, {2, 0}, {0, 0}, {0, 0}});
  EXPECT_EQ(ts::place_isolated(base, {}).coords, base.coords);

  const auto one = ts::place_isolated(base, {2});
  EXPECT_NEAR(ts::distance(one.coords[2], {0.0, 0.0}), 2.4, 1e-12);
  EXPECT_TRUE(one.isolated[2]);

  const auto two = ts::place_isolated(base, {2, 3});
  EXPECT_NEAR(ts::distance(two.coords[2], two.coords[3]), 4.8, 1e-12);  // antipodal
  EXPECT_NEAR(two.coords[2].x, 2.4, 1e-12);  // alphabetically first starts on +x
  EXPECT_EQ(two.coords[0], base.coords[0]);
}

TEST(ComputeLayout, IsolatedTermsOnRing) {
  const auto sim = make_sim({"a", "b", "c", "lonely", "zed"}, {{0, 1, 1.0}, {1, 2, 0.5}, {0, 2, 0.2}});
  const auto pos = ts::compute_layout(sim, unit_occ(5), quick_params());
  EXPECT_EQ(pos.isolated, (std::vector<bool>{false, false, false, true, true}));
  double radius = 0.0;
  for (int i = 0; i < 3; ++i) radius = std::max(radius, std::hypot(pos.coords[i].x, pos.coords[i].y));
  for (int i = 3; i < 5; ++i) EXPECT_NEAR(std::hypot(pos.coords[i].x, pos.coords[i].y), 1.2 * radius, 1e-12);
}

TEST(LayoutJson, RoundTrip) {
  std::mt19937_64 rng(96);
  const auto sim = random_sim(rng, 12);
  const auto params = quick_params(3);
  const auto pos = ts::compute_layout(sim, random_occ(rng, 12), params);
  const auto text = ts::canonical_json(ts::layout_to_json(pos, params));
  const auto back = ts::layout_from_json(ts::parse_json_document(text, "layout"), "layout");
  // rows come back in alphabetical order with bit-exact coordinates
  for (std::size_t k = 0; k < back.terms.size(); ++k) {
    const auto i = static_cast<std::size_t>(std::find(pos.terms.begin(), pos.terms.end(), back.terms[k]) -
                                            pos.terms.begin());
    EXPECT_EQ(back.coords[k], pos.coords[i]);
  }
  EXPECT_EQ(back.objective, pos.objective);
  EXPECT_EQ(back.converged, pos.converged);
  EXPECT_EQ(ts::canonical_json(ts::layout_to_json(back, params)), text);

  auto future = ts::layout_to_json(pos, params);
  future["schema"] = "layout/2";
  EXPECT_THROW(ts::layout_from_json(future, "layout"), ts::InputError);
}
