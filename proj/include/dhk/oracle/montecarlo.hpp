// Monte Carlo pushforward of Lebesgue measure on a ball in C^n under the
// linear moment map Phi(z) = Phi(0) + sum |z_i|^2 / 2 a_i, and its
// calibration against the unit-normalized Heaviside densities.
#pragma once

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dhk/conespline.hpp"
#include "dhk/error.hpp"
#include "dhk/rational.hpp"

namespace dhk::oracle {

/// SplitMix64 run in counter mode: output k is mix(seed + k * gamma), so a
/// stream is fixed by (seed, position) alone.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix(state_ += 0x9E3779B97F4A7C15ULL); }
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

struct MonteCarloConfig {
  std::uint64_t seed = 7;
  std::uint64_t samples = 1'000'000;
  double cutoff_radius = 4.0;
  unsigned chunks = 8;  // independent streams, chunk index mixed into the seed
};

/// Axis-aligned bins in t*.
struct DensityGrid {
  std::vector<double> lower, upper;
  std::vector<std::size_t> bins;

  std::size_t size() const {
    std::size_t s = 1;
    for (auto b : bins) s *= b;
    return s;
  }
  double bin_volume() const {
    double v = 1;
    for (std::size_t k = 0; k < bins.size(); ++k) v *= (upper[k] - lower[k]) / static_cast<double>(bins[k]);
    return v;
  }
  /// Lower corner of bin `flat` (first axis fastest).
  std::vector<double> corner(std::size_t flat) const {
    std::vector<double> c(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) {
      double h = (upper[k] - lower[k]) / static_cast<double>(bins[k]);
      c[k] = lower[k] + h * static_cast<double>(flat % bins[k]);
      flat /= bins[k];
    }
    return c;
  }
  std::vector<double> widths() const {
    std::vector<double> w(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) w[k] = (upper[k] - lower[k]) / static_cast<double>(bins[k]);
    return w;
  }
};

struct MonteCarloTable {
  DensityGrid grid;
  std::vector<std::uint64_t> counts;
  std::vector<double> density;  // Darboux normalization: pushforward of omega^n / n!
  std::vector<double> error;    // one standard deviation
  std::vector<bool> complete;   // the ball contains every fiber over the bin
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double ball_volume = 0;
};

inline MonteCarloTable montecarlo_pushforward(std::size_t dim, const std::vector<RatVec>& weights,
                                              const RatVec& phi0, const DensityGrid& grid,
                                              const MonteCarloConfig& cfg = {}) {
  if (cfg.samples < 10'000) throw InputError("montecarlo: at least 1e4 samples are required");
  if (!(cfg.cutoff_radius > 0)) throw InputError("montecarlo: cutoff radius must be positive");
  if (weights.empty()) throw InputError("montecarlo: no weights");
  if (phi0.size() != dim || grid.lower.size() != dim || grid.upper.size() != dim || grid.bins.size() != dim)
    throw DimensionError("montecarlo: grid or base point has wrong dimension");
  for (std::size_t k = 0; k < dim; ++k)
    if (grid.bins[k] == 0 || !(grid.upper[k] > grid.lower[k])) throw InputError("montecarlo: empty grid axis");
  for (const auto& a : weights)
    if (a.size() != dim) throw DimensionError("montecarlo: weight has wrong dimension");
  auto eta_r = conespline::positive_functional(dim, weights);
  if (!eta_r) throw GeometryError("montecarlo: weights do not generate a proper cone");

  const std::size_t n = weights.size();
  std::vector<std::vector<double>> a;
  for (const auto& w : weights) a.push_back(to_double(w));
  auto p0 = to_double(phi0);
  const double r = cfg.cutoff_radius;
  const std::size_t cells = grid.size();
  auto widths = grid.widths();

  unsigned chunks = std::max(1u, cfg.chunks);
  auto run = [&](unsigned c) {
    std::vector<std::uint64_t> counts(cells, 0);
    std::uint64_t m = cfg.samples / chunks + (c < cfg.samples % chunks ? 1 : 0);
    SplitMix64 rng(cfg.seed ^ SplitMix64::mix(0xD1B54A32D192ED03ULL * (c + 1)));
    boost::random::normal_distribution<double> gauss;
    boost::random::uniform_01<double> unif;
    std::vector<double> x(2 * n), mu(dim);
    for (std::uint64_t s = 0; s < m; ++s) {
      // uniform point of the ball in R^{2n}
      double len = 0;
      for (auto& v : x) {
        v = gauss(rng);
        len += v * v;
      }
      double scale = r * std::pow(unif(rng), 1.0 / static_cast<double>(2 * n)) / std::sqrt(len);
      mu = p0;
      for (std::size_t i = 0; i < n; ++i) {
        double h = 0.5 * scale * scale * (x[2 * i] * x[2 * i] + x[2 * i + 1] * x[2 * i + 1]);
        for (std::size_t k = 0; k < dim; ++k) mu[k] += h * a[i][k];
      }
      std::size_t flat = 0, stride = 1;
      bool inside = true;
      for (std::size_t k = 0; k < dim && inside; ++k) {
        double t = (mu[k] - grid.lower[k]) / widths[k];
        if (t < 0 || t >= static_cast<double>(grid.bins[k])) inside = false;
        else flat += stride * static_cast<std::size_t>(t);
        stride *= grid.bins[k];
      }
      if (inside) ++counts[flat];
    }
    return counts;
  };
  std::vector<std::future<std::vector<std::uint64_t>>> parts;
  for (unsigned c = 0; c < chunks; ++c) parts.push_back(std::async(std::launch::async, run, c));

  MonteCarloTable t;
  t.grid = grid;
  t.counts.assign(cells, 0);
  for (auto& p : parts) {
    auto counts = p.get();
    for (std::size_t b = 0; b < cells; ++b) t.counts[b] += counts[b];
  }
  t.samples = cfg.samples;
  t.seed = cfg.seed;
  t.ball_volume = std::pow(std::numbers::pi * r * r, static_cast<double>(n)) / std::tgamma(static_cast<double>(n) + 1);

  // fibers over mu satisfy sum s_i <= <eta, mu - phi0> / min <eta, a_i>
  auto eta = to_double(*eta_r);
  double min_eta = std::numeric_limits<double>::infinity();
  for (const auto& w : a) {
    double s = 0;
    for (std::size_t k = 0; k < dim; ++k) s += eta[k] * w[k];
    min_eta = std::min(min_eta, s);
  }
  double per = t.ball_volume / (static_cast<double>(cfg.samples) * grid.bin_volume());
  for (std::size_t b = 0; b < cells; ++b) {
    t.density.push_back(static_cast<double>(t.counts[b]) * per);
    t.error.push_back(std::sqrt(static_cast<double>(t.counts[b])) * per);
    auto lo = grid.corner(b);
    double reach = 0;
    for (std::size_t k = 0; k < dim; ++k) reach += std::max(eta[k] * (lo[k] - p0[k]), eta[k] * (lo[k] + widths[k] - p0[k]));
    t.complete.push_back(reach / min_eta <= 0.5 * r * r);
  }
  return t;
}

struct CalibrationReport {
  std::size_t halfdim = 0;
  std::vector<double> ratio, sigma;  // per complete, nonempty bin
  double kappa = 0;                  // weighted mean of Monte Carlo / engine
  double kappa_error = 0;
  double per_dimension = 0;          // kappa^{1/n}
  double max_deviation = 0;          // max |ratio - kappa| / sigma
  bool constant = false;             // every bin within 3 sigma
};

/// Bin averages of the engine density (3-point Gauss per axis) against the
/// Monte Carlo table; only complete bins with positive engine mass count.
inline CalibrationReport calibrate(const MonteCarloTable& t, std::size_t dim, const std::vector<RatVec>& weights,
                                   const RatVec& phi0) {
  static constexpr std::array<double, 3> gx = {0.1127016653792583, 0.5, 0.8872983346207417};
  static constexpr std::array<double, 3> gw = {5.0 / 18, 8.0 / 18, 5.0 / 18};
  conespline::FiberVolume fv(dim, weights);
  auto p0 = to_double(phi0);
  auto widths = t.grid.widths();
  CalibrationReport rep;
  rep.halfdim = weights.size();
  double num = 0, den = 0;
  std::vector<double> mu(dim);
  for (std::size_t b = 0; b < t.density.size(); ++b) {
    if (!t.complete[b] || t.counts[b] == 0) continue;
    auto lo = t.grid.corner(b);
    double avg = 0;
    std::size_t nodes = 1;
    for (std::size_t k = 0; k < dim; ++k) nodes *= 3;
    for (std::size_t q = 0; q < nodes; ++q) {
      double w = 1;
      std::size_t r = q;
      for (std::size_t k = 0; k < dim; ++k) {
        mu[k] = lo[k] + gx[r % 3] * widths[k] - p0[k];
        w *= gw[r % 3];
        r /= 3;
      }
      avg += w * fv(mu).value;
    }
    if (!(avg > 0)) continue;
    double ratio = t.density[b] / avg, sigma = t.error[b] / avg;
    rep.ratio.push_back(ratio);
    rep.sigma.push_back(sigma);
    num += ratio / (sigma * sigma);
    den += 1 / (sigma * sigma);
  }
  if (rep.ratio.empty()) throw InputError("calibrate: no complete bins with mass");
  rep.kappa = num / den;
  rep.kappa_error = 1 / std::sqrt(den);
  rep.per_dimension = std::pow(rep.kappa, 1.0 / static_cast<double>(rep.halfdim));
  for (std::size_t k = 0; k < rep.ratio.size(); ++k)
    rep.max_deviation = std::max(rep.max_deviation, std::abs(rep.ratio[k] - rep.kappa) / rep.sigma[k]);
  rep.constant = rep.max_deviation <= 3.0;
  return rep;
}

}  // namespace dhk::oracle
