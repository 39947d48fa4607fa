#include "hotspot/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace hotspot::eval {

ScoredPairs score_matrix(const Eigen::MatrixXd& scores,
                         const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>* truth) {
  if (truth && (truth->rows() != scores.rows() || truth->cols() != scores.cols()))
    throw std::invalid_argument("score and truth matrices differ in shape");
  ScoredPairs out;
  out.reserve(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index t = 0; t < scores.cols(); ++t)
    for (Eigen::Index s = 0; s < scores.rows(); ++s) {
      ScoredPair sp{static_cast<std::size_t>(s), static_cast<std::size_t>(t), scores(s, t), {}};
      if (truth) sp.truth = (*truth)(s, t);
      out.push_back(sp);
    }
  return out;
}

std::vector<RocPoint> roc_points(const ScoredPairs& scored) {
  std::size_t pos = 0, neg = 0;
  for (const auto& sp : scored) {
    if (!sp.truth) throw std::invalid_argument("ROC needs truth labels for every pair");
    if (!std::isfinite(sp.score)) throw std::invalid_argument("non-finite score");
    (*sp.truth ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) throw std::invalid_argument("ROC needs both positive and negative pairs");

  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].score > scored[b].score; });
  std::vector<RocPoint> roc{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double v = scored[order[i]].score;
    for (; i < order.size() && scored[order[i]].score == v; ++i)
      (*scored[order[i]].truth ? tp : fp) += 1;
    roc.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                   static_cast<double>(tp) / static_cast<double>(pos)});
  }
  return roc;
}

double std_partial_auc(const std::vector<RocPoint>& roc, double cap) {
  if (!(cap > 0.0 && cap <= 1.0)) throw std::invalid_argument("FPR cap must lie in (0,1]");
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    const RocPoint a = roc[i - 1], b = roc[i];
    if (a.fpr >= cap) break;
    if (b.fpr <= cap) {
      area += 0.5 * (b.fpr - a.fpr) * (a.tpr + b.tpr);
    } else {
      const double w = (cap - a.fpr) / (b.fpr - a.fpr);
      const double tpr_cap = a.tpr + w * (b.tpr - a.tpr);
      area += 0.5 * (cap - a.fpr) * (a.tpr + tpr_cap);
    }
  }
  const double chance = 0.5 * cap * cap;
  return 50.0 * (1.0 + (area - chance) / (cap - chance));
}

double std_partial_auc(const ScoredPairs& scored, double cap) {
  return std_partial_auc(roc_points(scored), cap);
}

HotspotCall call_hotspots(const Eigen::MatrixXd& ppi, double threshold) {
  HotspotCall out{std::vector<std::size_t>(static_cast<std::size_t>(ppi.rows()), 0), threshold};
  for (Eigen::Index s = 0; s < ppi.rows(); ++s)
    out.sizes[static_cast<std::size_t>(s)] =
        static_cast<std::size_t>((ppi.row(s).array() >= threshold).count());
  return out;
}

FdrEstimate bayesian_fdr(const std::vector<double>& ppis, double threshold) {
  double sum = 0.0;
  std::size_t k = 0;
  for (double v : ppis)
    if (v >= threshold) {
      sum += 1.0 - v;
      ++k;
    }
  if (k == 0) return {0.0, 0, true};
  return {sum / static_cast<double>(k), k, false};
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n == 0) throw std::invalid_argument("interpolant needs matching points");
  d_.assign(n, 0.0);
  if (n == 1) return;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    if (!(h[i] > 0.0)) throw std::invalid_argument("interpolant abscissae must increase");
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::fabs(d) > std::fabs(3.0 * d0)) return 3.0 * d0;
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t n = x_.size();
  if (n == 1 || x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double u = (x - x_[i]) / h;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y_[i] + (u3 - 2 * u2 + u) * h * d_[i] +
         (-2 * u3 + 3 * u2) * y_[i + 1] + (u3 - u2) * h * d_[i + 1];
}

ThresholdResult permutation_fdr_threshold(const std::vector<double>& real_ppis,
                                          const std::vector<std::vector<double>>& permuted_ppis,
                                          double target, FdrEstimator estimator,
                                          std::size_t grid_size) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target FDR must lie in (0,1)");
  if (permuted_ppis.empty()) throw std::invalid_argument("need at least one permutation run");
  if (grid_size < 1) throw std::invalid_argument("grid must be non-empty");

  std::vector<double> real = real_ppis;
  std::sort(real.begin(), real.end());
  std::vector<double> pooled;
  for (const auto& run : permuted_ppis) pooled.insert(pooled.end(), run.begin(), run.end());
  std::sort(pooled.begin(), pooled.end());
  auto count_ge = [](const std::vector<double>& sorted, double thr) {
    return static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), thr));
  };
  const double runs = static_cast<double>(permuted_ppis.size());
  // suffix[i] = sum over real[i..] of (1 - ppi)
  std::vector<double> suffix(real.size() + 1, 0.0);
  for (std::size_t i = real.size(); i-- > 0;) suffix[i] = suffix[i + 1] + (1.0 - real[i]);

  ThresholdResult out{1.0, 1.0, true, {}, {}};
  for (std::size_t k = 1; k <= grid_size; ++k) {
    const double thr = static_cast<double>(k) / static_cast<double>(grid_size);
    const double n_real = count_ge(real, thr);
    if (n_real == 0.0) continue;
    double fdr;
    if (estimator == FdrEstimator::kBayesian) {
      const auto first = static_cast<std::size_t>(
          std::lower_bound(real.begin(), real.end(), thr) - real.begin());
      fdr = suffix[first] / n_real;
    } else {
      fdr = std::clamp(count_ge(pooled, thr) / runs / n_real, 0.0, 1.0);
    }
    out.grid.push_back(thr);
    out.grid_fdr.push_back(fdr);
  }
  if (out.grid.empty()) return out;
  for (std::size_t i = out.grid_fdr.size() - 1; i-- > 0;)
    out.grid_fdr[i] = std::max(out.grid_fdr[i], out.grid_fdr[i + 1]);

  std::size_t k = 0;
  while (k < out.grid.size() && out.grid_fdr[k] > target) ++k;
  if (k == out.grid.size()) return out;
  out.unattainable = false;
  if (k == 0) {
    out.threshold = out.grid[0];
    out.estimated_fdr = out.grid_fdr[0];
    return out;
  }
  const MonotoneCubic spline(out.grid, out.grid_fdr);
  double lo = out.grid[k - 1], hi = out.grid[k];
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (spline(mid) <= target ? hi : lo) = mid;
  }
  out.threshold = hi;
  out.estimated_fdr = spline(hi);
  return out;
}

ScreenResult univariate_screen(const DataSet& data) {
  const Eigen::Index n = data.X.rows();
  if (n < 3) throw std::invalid_argument("univariate screening needs n >= 3");
  if (data.Y.rows() != n) throw std::invalid_argument("sample counts differ");
  const Eigen::MatrixXd Xc = data.X.rowwise() - data.X.colwise().mean();
  const Eigen::MatrixXd Yc = data.Y.rowwise() - data.Y.colwise().mean();
  const Eigen::VectorXd sxx = Xc.colwise().squaredNorm().transpose();
  const Eigen::VectorXd syy = Yc.colwise().squaredNorm().transpose();
  const Eigen::MatrixXd sxy = Xc.transpose() * Yc;
  const double df = static_cast<double>(n - 2);
  const boost::math::students_t dist(df);

  ScreenResult out;
  out.pvalues = Eigen::MatrixXd::Ones(Xc.cols(), Yc.cols());
  for (Eigen::Index s = 0; s < Xc.cols(); ++s) {
    if (!(sxx[s] > 1e-12 * std::max(1.0, data.X.col(s).squaredNorm()))) {
      out.zero_variance_predictors.push_back(static_cast<std::size_t>(s));
      continue;
    }
    for (Eigen::Index t = 0; t < Yc.cols(); ++t) {
      const double b = sxy(s, t) / sxx[s];
      const double sse = std::max(0.0, syy[t] - b * sxy(s, t));
      if (sse <= 1e-28 * std::max(syy[t], 1e-300)) {
        out.pvalues(s, t) = syy[t] > 0.0 ? 0.0 : 1.0;
        continue;
      }
      const double tstat = b / std::sqrt(sse / df / sxx[s]);
      out.pvalues(s, t) = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(tstat)));
    }
  }
  return out;
}

std::vector<std::size_t> benjamini_hochberg(const std::vector<double>& pvalues, double level) {
  const std::size_t m = pvalues.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (pvalues[order[i]] <= static_cast<double>(i + 1) * level / static_cast<double>(m)) k = i + 1;
  std::vector<std::size_t> rejected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(rejected.begin(), rejected.end());
  return rejected;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j - 1) + 1.0;
    for (std::size_t k = i; k < j; ++k) r[order[k]] = rank;
    i = j;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("spearman needs paired data");
  const auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace hotspot::eval
