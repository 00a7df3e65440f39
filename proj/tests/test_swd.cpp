#include "mcqual/swd.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mcqual/errors.hpp"
#include "mcqual/rng.hpp"
#include "mcqual/sample_batch.hpp"
#include "test_support.hpp"

using mcqual::ParameterError;
using mcqual::SampleBatch;
using mcqual::SwdConfig;
using mcqual::sample_unit_sphere;
using mcqual::sliced_wasserstein;
using mcqual::swd_directions;
using mcqual::wasserstein_1d;

namespace {

SampleBatch gaussian_batch(int n, int d, std::uint64_t seed,
                           double shift = 0.0, double scale = 1.0) {
  mcqual::Rng rng(seed);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) pts(i, j) = rng.normal() * scale + shift;
  }
  return SampleBatch(std::move(pts));
}

// Minimum-cost assignment by exhaustive permutation search; the exact 1D
// transport cost for any p >= 1.
double brute_force_w(std::vector<double> xs, std::vector<double> ys,
                     double p) {
  std::vector<std::size_t> idx(ys.size());
  std::iota(idx.begin(), idx.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cost += std::pow(std::fabs(xs[i] - ys[idx[i]]), p);
    }
    best = std::min(best, cost);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return std::pow(best / static_cast<double>(xs.size()), 1.0 / p);
}

}  // namespace

TEST_SUITE("swd") {

TEST_CASE("1d distance on hand-checkable sets") {
  CHECK(wasserstein_1d({3.0, 1.0, 2.0}, {2.0, 3.0, 1.0}, 1.0) == 0.0);
  CHECK(wasserstein_1d({0.0, 0.0}, {1.0, 1.0}, 1.0) == 1.0);
  CHECK(wasserstein_1d({0.0, 1.0}, {1.0, 0.0}, 2.0) == 0.0);
  CHECK(wasserstein_1d({0.0}, {5.0}, 1.0) == 5.0);
  // p=2 on {0,2} vs {1,1}: sqrt((1+1)/2) = 1.
  CHECK(wasserstein_1d({0.0, 2.0}, {1.0, 1.0}, 2.0) == 1.0);
}

TEST_CASE("1d distance validates its inputs") {
  CHECK_THROWS_AS(wasserstein_1d({1.0, 2.0}, {1.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(wasserstein_1d({}, {}, 1.0), ParameterError);
  CHECK_THROWS_AS(wasserstein_1d({1.0}, {1.0}, 0.5), ParameterError);
}

TEST_CASE("1d distance matches the brute-force assignment oracle") {
  mcqual::Rng rng(2222);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rng.uniform(-5.0, 5.0);
      ys[i] = rng.uniform(-5.0, 5.0);
    }
    for (double p : {1.0, 1.5, 2.0}) {
      CAPTURE(rep);
      CAPTURE(p);
      const double sorted = wasserstein_1d(xs, ys, p);
      const double brute = brute_force_w(xs, ys, p);
      REQUIRE(std::fabs(sorted - brute) <= 1e-12 * std::max(1.0, brute));
    }
  }
}

TEST_CASE("unit sphere draws are normalized and uniform") {
  CHECK(std::fabs(sample_unit_sphere(1, 5)[0]) == 1.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::VectorXd v = sample_unit_sphere(3, seed);
    CAPTURE(seed);
    REQUIRE(std::fabs(v.norm() - 1.0) <= 1e-12);
  }

  // Directional uniformity on the circle: the average direction vanishes.
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    mean += sample_unit_sphere(2, static_cast<std::uint64_t>(i + 1000));
  }
  mean /= static_cast<double>(n);
  CHECK(mean.norm() < 0.05);

  CHECK(sample_unit_sphere(4, 9) == sample_unit_sphere(4, 9));
}

TEST_CASE("direction lists are deterministic with a prefix structure") {
  SwdConfig small;
  small.L = 10;
  small.seed = 88;
  SwdConfig large;
  large.L = 50;
  large.seed = 88;

  const auto few = swd_directions(3, small);
  const auto many = swd_directions(3, large);
  REQUIRE(few.size() == 10);
  REQUIRE(many.size() == 50);
  for (std::size_t i = 0; i < few.size(); ++i) {
    CAPTURE(i);
    REQUIRE(few[i] == many[i]);  // more directions only extend the list
  }
  for (const auto& dir : many) {
    REQUIRE(std::fabs(dir.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("self-distance is exactly zero and symmetry is bitwise") {
  SwdConfig cfg;
  cfg.L = 17;
  cfg.seed = 5;
  for (int rep = 0; rep < 20; ++rep) {
    const SampleBatch x =
        gaussian_batch(60, 3, 100 + static_cast<std::uint64_t>(rep), 0.5);
    const SampleBatch y =
        gaussian_batch(60, 3, 200 + static_cast<std::uint64_t>(rep), -0.5,
                       1.3);
    CAPTURE(rep);
    REQUIRE(sliced_wasserstein(x, x, cfg) == 0.0);
    const double xy = sliced_wasserstein(x, y, cfg);
    REQUIRE(xy >= 0.0);
    REQUIRE(xy == sliced_wasserstein(y, x, cfg));
  }
}

TEST_CASE("triangle inequality holds per shared direction set") {
  SwdConfig cfg;
  cfg.L = 15;
  cfg.p = 1.0;
  cfg.seed = 314;
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = static_cast<std::uint64_t>(rep);
    const SampleBatch x = gaussian_batch(100, 3, 3 * s + 1, 0.0);
    const SampleBatch y = gaussian_batch(100, 3, 3 * s + 2, 1.0, 2.0);
    const SampleBatch z = gaussian_batch(100, 3, 3 * s + 3, -2.0, 0.5);
    const double xz = sliced_wasserstein(x, z, cfg);
    const double xy = sliced_wasserstein(x, y, cfg);
    const double yz = sliced_wasserstein(y, z, cfg);
    CAPTURE(rep);
    REQUIRE(xz <= xy + yz + 1e-9);
  }
}

TEST_CASE("one-dimensional input reduces exactly to the 1d distance") {
  mcqual::Rng rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(40));
    Eigen::MatrixXd xs(n, 1), ys(n, 1);
    std::vector<double> xv(static_cast<std::size_t>(n));
    std::vector<double> yv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      xs(i, 0) = rng.normal() * 2.0;
      ys(i, 0) = rng.normal() + 0.7;
      xv[static_cast<std::size_t>(i)] = xs(i, 0);
      yv[static_cast<std::size_t>(i)] = ys(i, 0);
    }
    SwdConfig cfg;
    cfg.L = 1 + static_cast<int>(rng.below(60));
    cfg.p = (rep % 2 == 0) ? 1.0 : 2.0;
    cfg.seed = rng.next_u64();
    CAPTURE(rep);
    REQUIRE(sliced_wasserstein(SampleBatch(xs), SampleBatch(ys), cfg) ==
            wasserstein_1d(xv, yv, cfg.p));
  }
}

TEST_CASE("a pure shift matches the per-direction oracle") {
  const int n = 1000;
  const SampleBatch x = gaussian_batch(n, 2, 404);
  Eigen::MatrixXd shifted = x.points();
  shifted.col(0).array() += 2.0;
  const SampleBatch y(std::move(shifted));

  SwdConfig cfg;
  cfg.L = 25;
  cfg.seed = 1001;
  const double estimate = sliced_wasserstein(x, y, cfg);

  // Per direction theta the projected sets differ by the constant 2*theta_x,
  // so the 1D distance is |2 theta_x| exactly and the aggregate is their
  // mean over the same directions.
  double oracle = 0.0;
  for (const Eigen::VectorXd& dir : swd_directions(2, cfg)) {
    oracle += std::fabs(2.0 * dir[0]);
  }
  oracle /= cfg.L;

  CHECK(std::fabs(estimate - oracle) <= 0.15 * oracle);
  CHECK(estimate == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("projection count reduces estimator spread") {
  const SampleBatch x = gaussian_batch(200, 2, 7);
  mcqual::Rng mixer(8);
  Eigen::MatrixXd pts(200, 2);
  for (int i = 0; i < 200; ++i) {
    const double sign = mixer.uniform01() < 0.5 ? -1.0 : 1.0;
    pts(i, 0) = mixer.normal() + 2.0 * sign;
    pts(i, 1) = mixer.normal();
  }
  const SampleBatch y(std::move(pts));

  const auto spread = [&](int L) {
    std::vector<double> vals;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      SwdConfig cfg;
      cfg.L = L;
      cfg.seed = seed;
      vals.push_back(sliced_wasserstein(x, y, cfg));
    }
    return testsup::sample_std(vals);
  };
  CHECK(spread(100) < spread(10));
}

TEST_CASE("batch preconditions are enforced") {
  const SampleBatch x = gaussian_batch(50, 2, 1);
  const SampleBatch y = gaussian_batch(50, 2, 2);
  SwdConfig cfg;

  const SampleBatch fewer = gaussian_batch(49, 2, 3);
  CHECK_THROWS_AS(sliced_wasserstein(x, fewer, cfg), ParameterError);

  const SampleBatch wider = gaussian_batch(50, 3, 4);
  CHECK_THROWS_AS(sliced_wasserstein(x, wider, cfg), ParameterError);

  const SampleBatch weighted(gaussian_batch(50, 2, 5).points(),
                             Eigen::VectorXd::Constant(50, 0.5));
  CHECK_THROWS_AS(sliced_wasserstein(weighted, y, cfg), ParameterError);
  CHECK_THROWS_AS(sliced_wasserstein(x, weighted, cfg), ParameterError);

  SwdConfig bad_l;
  bad_l.L = 0;
  CHECK_THROWS_AS(sliced_wasserstein(x, y, bad_l), ParameterError);

  SwdConfig bad_p;
  bad_p.p = 0.5;
  CHECK_THROWS_AS(sliced_wasserstein(x, y, bad_p), ParameterError);
}

}  // TEST_SUITE
