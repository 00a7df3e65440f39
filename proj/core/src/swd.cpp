#include "mcqual/swd.hpp"

#include <algorithm>
#include <cmath>

#include "mcqual/errors.hpp"
#include "mcqual/rng.hpp"

namespace mcqual {

namespace {

void check_order(double p) {
  if (!(p >= 1.0)) throw ParameterError("wasserstein order p must be >= 1");
}

// Mean of |a_j - b_j|^p over already-sorted vectors; this is W_p^p.
double sorted_pth_moment(const std::vector<double>& a,
                         const std::vector<double>& b, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
  } else {
    for (std::size_t j = 0; j < a.size(); ++j) {
      s += std::pow(std::abs(a[j] - b[j]), p);
    }
  }
  return s / static_cast<double>(a.size());
}

Eigen::VectorXd sphere_draw(int d, Rng& rng) {
  Eigen::VectorXd v(d);
  for (;;) {
    for (int j = 0; j < d; ++j) v[j] = rng.normal();
    const double norm = v.norm();
    if (norm > 0.0) return v / norm;
  }
}

}  // namespace

double wasserstein_1d(std::vector<double> xs, std::vector<double> ys,
                      double p) {
  check_order(p);
  if (xs.size() != ys.size()) {
    throw ParameterError("wasserstein_1d: lengths differ (" +
                         std::to_string(xs.size()) + " vs " +
                         std::to_string(ys.size()) + ")");
  }
  if (xs.empty()) throw ParameterError("wasserstein_1d: empty input");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double wp = sorted_pth_moment(xs, ys, p);
  return p == 1.0 ? wp : std::pow(wp, 1.0 / p);
}

Eigen::VectorXd sample_unit_sphere(int d, std::uint64_t seed) {
  if (d < 1) throw ParameterError("sample_unit_sphere: d must be >= 1");
  Rng rng(seed);
  return sphere_draw(d, rng);
}

std::vector<Eigen::VectorXd> swd_directions(int d, const SwdConfig& cfg) {
  if (d < 1) throw ParameterError("swd_directions: d must be >= 1");
  if (cfg.L < 1) throw ParameterError("swd: L must be >= 1");
  check_order(cfg.p);
  // One sequential stream: the first L directions for a given seed do not
  // depend on L, so estimates at growing L refine the same projection set.
  Rng rng(derive_seed(cfg.seed, 0, "swd-directions"));
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(cfg.L));
  for (int i = 0; i < cfg.L; ++i) dirs.push_back(sphere_draw(d, rng));
  return dirs;
}

double sliced_wasserstein(const SampleBatch& x, const SampleBatch& y,
                          const SwdConfig& cfg) {
  if (x.has_weights() || y.has_weights()) {
    throw ParameterError(
        "sliced_wasserstein: weighted input; resample to unweighted points "
        "first");
  }
  if (x.size() != y.size()) {
    throw ParameterError("sliced_wasserstein: sizes differ (" +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
  if (x.dimension() != y.dimension()) {
    throw ParameterError("sliced_wasserstein: dimensions differ (" +
                         std::to_string(x.dimension()) + " vs " +
                         std::to_string(y.dimension()) + ")");
  }
  check_order(cfg.p);
  if (cfg.L < 1) throw ParameterError("swd: L must be >= 1");

  const std::size_t n = static_cast<std::size_t>(x.size());
  const int d = static_cast<int>(x.dimension());

  if (d == 1) {
    // Exact reduction: every direction is +1 or -1 and |a - b| is invariant
    // under a global sign flip, so all L projections produce the same 1D
    // distance. Computing it once keeps the equivalence exact instead of
    // averaging L copies in floating point.
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = x.points()(static_cast<Eigen::Index>(i), 0);
      ys[i] = y.points()(static_cast<Eigen::Index>(i), 0);
    }
    return wasserstein_1d(std::move(xs), std::move(ys), cfg.p);
  }

  const std::vector<Eigen::VectorXd> dirs = swd_directions(d, cfg);
  std::vector<double> a(n), b(n);
  double acc = 0.0;
  for (const Eigen::VectorXd& theta : dirs) {
    const Eigen::VectorXd xa = x.points() * theta;
    const Eigen::VectorXd xb = y.points() * theta;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = xa[static_cast<Eigen::Index>(i)];
      b[i] = xb[static_cast<Eigen::Index>(i)];
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    acc += sorted_pth_moment(a, b, cfg.p);
  }
  const double mean_wp = acc / static_cast<double>(dirs.size());
  return cfg.p == 1.0 ? mean_wp : std::pow(mean_wp, 1.0 / cfg.p);
}

}  // namespace mcqual
