#include "cfpr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

namespace cfpr {

void CensusSample::add(const TriadCensus& c) {
  std::vector<double> row(c.counts.begin(), c.counts.end());
  add(std::move(row));
}

void CensusSample::add(const DyadCensus& c) {
  add(std::vector<double>{static_cast<double>(c.mutual), static_cast<double>(c.asym),
                          static_cast<double>(c.null)});
}

void CensusSample::add(std::vector<double> row) {
  if (!rows.empty() && row.size() != rows.front().size()) {
    throw std::invalid_argument("census rows must share one dimension");
  }
  rows.push_back(std::move(row));
}

namespace {

Eigen::MatrixXd to_matrix(const CensusSample& s) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(s.rows.size()), static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s.rows[i][j];
  return x;
}

}  // namespace

HotellingResult hotelling_t2(const CensusSample& a, const CensusSample& b) {
  if (a.rows.size() < 2 || b.rows.size() < 2) throw std::invalid_argument("each sample needs at least 2 rows");
  if (a.dim() != b.dim() || a.dim() == 0) throw std::invalid_argument("samples must share a positive dimension");
  const Eigen::MatrixXd xa = to_matrix(a), xb = to_matrix(b);
  const double n1 = static_cast<double>(xa.rows()), n2 = static_cast<double>(xb.rows());
  const Eigen::VectorXd ma = xa.colwise().mean(), mb = xb.colwise().mean();
  const Eigen::MatrixXd ca = xa.rowwise() - ma.transpose();
  const Eigen::MatrixXd cb = xb.rowwise() - mb.transpose();
  const Eigen::MatrixXd pooled = (ca.transpose() * ca + cb.transpose() * cb) / (n1 + n2 - 2.0);
  const Eigen::VectorXd diff = ma - mb;

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < pooled.rows(); ++j) {
    if (pooled(j, j) > 0.0) {
      keep.push_back(j);
    } else if (diff(j) != 0.0) {
      // constant within both samples at different values
      return {std::numeric_limits<double>::infinity(), 0.0, 0, std::numeric_limits<double>::infinity(), 0.0, 0.0};
    }
  }
  if (keep.empty()) throw std::invalid_argument("every component has zero variance in both samples");

  const auto k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd corr(k, k);
  Eigen::VectorXd z(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const double sr = std::sqrt(pooled(keep[r], keep[r]));
    z(r) = diff(keep[r]) / sr;
    for (Eigen::Index c = 0; c < k; ++c) {
      corr(r, c) = pooled(keep[r], keep[c]) / (sr * std::sqrt(pooled(keep[c], keep[c])));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cut = kPinvTolerance * lambda.maxCoeff();
  const Eigen::VectorXd proj = eig.eigenvectors().transpose() * z;
  double quad = 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (lambda(i) > cut) {
      quad += proj(i) * proj(i) / lambda(i);
      ++rank;
    }
  }
  if (rank == 0) throw std::invalid_argument("pooled covariance has rank zero");

  HotellingResult out;
  out.t2 = n1 * n2 / (n1 + n2) * quad;
  out.dim = rank;
  const double p = static_cast<double>(rank);
  out.df1 = p;
  out.df2 = n1 + n2 - p - 1.0;
  if (!(out.df2 > 0.0)) {
    throw std::invalid_argument(fmt::format("too few rows ({} + {}) for dimension {}", n1, n2, rank));
  }
  out.f = out.df2 / ((n1 + n2 - 2.0) * p) * out.t2;
  boost::math::fisher_f dist(out.df1, out.df2);
  out.p = boost::math::cdf(boost::math::complement(dist, out.f));
  return out;
}

double hotelling_critical_value(double alpha, std::size_t p, std::size_t n1, std::size_t n2) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const double pd = static_cast<double>(p), n = static_cast<double>(n1 + n2);
  const double df2 = n - pd - 1.0;
  if (p == 0 || !(df2 > 0.0)) throw std::invalid_argument("invalid dimension for the sample sizes");
  boost::math::fisher_f dist(pd, df2);
  const double f = boost::math::quantile(boost::math::complement(dist, alpha));
  return f * (n - 2.0) * pd / df2;
}

MeanCI mean_ci(std::span<const double> samples, double level) {
  if (samples.size() < 2) throw std::invalid_argument("mean_ci needs at least 2 samples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
  double sum = 0.0;
  for (double x : samples) {
    if (!std::isfinite(x)) throw std::invalid_argument("mean_ci: non-finite sample");
    sum += x;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + level / 2.0);
  const double half = z * sd / std::sqrt(n);
  return {mean, mean - half, mean + half, sd, samples.size()};
}

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = q * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

PowerLawFit powerlaw_fit(std::span<const std::pair<double, double>> points, double level) {
  if (points.size() < 3) throw std::invalid_argument("powerlaw_fit needs at least 3 points");
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw std::invalid_argument(fmt::format("powerlaw_fit needs positive values, got ({}, {})", x, y));
    }
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("powerlaw_fit needs at least two distinct x values");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - fit.intercept - fit.exponent * lx[i];
    sse += r * r;
  }
  fit.std_error = std::sqrt(sse / (n - 2.0) / sxx);
  const double t = boost::math::quantile(boost::math::students_t(n - 2.0), 0.5 + level / 2.0);
  fit.ci_low = fit.exponent - t * fit.std_error;
  fit.ci_high = fit.exponent + t * fit.std_error;
  return fit;
}

}  // namespace cfpr
