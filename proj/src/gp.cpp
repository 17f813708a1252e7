#include "simvec/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "simvec/error.hpp"
#include "simvec/rng.hpp"

namespace simvec {

double matern52(double r) {
  const double s = std::sqrt(5.0) * r;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& f,
                                std::vector<double> x0, double step, int max_evals,
                                double* fbest) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> fv(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& p) {
    ++evals;
    double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);
  std::vector<std::size_t> idx(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };
  while (evals < max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
    if (std::abs(fv[worst] - fv[best]) <= 1e-10 * (std::abs(fv[best]) + 1e-10)) break;
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    along(-1.0, xr, simplex[worst]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      along(-2.0, xe, simplex[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      along(outside ? -0.5 : 0.5, xc, simplex[worst]);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          fv[i] = eval(simplex[i]);
        }
      }
    }
  }
  const auto b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  if (fbest) *fbest = fv[b];
  return simplex[b];
}

// ---------------------------------------------------------------------------

double GpPosterior::kernel(const GpHyper& h, std::span<const double> a,
                           std::span<const double> b) const {
  double r2 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double t = (a[d] - b[d]) / h.length_scales[d];
    r2 += t * t;
  }
  return h.signal_var * matern52(std::sqrt(r2));
}

bool GpPosterior::factorize(const GpHyper& h, Eigen::LLT<Eigen::MatrixXd>& llt) const {
  const auto n = x_.rows();
  const auto d = static_cast<std::size_t>(x_.cols());
  Eigen::MatrixXd k(n, n);
  std::vector<double> a(d), b(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) a[c] = x_(i, static_cast<Eigen::Index>(c));
    for (Eigen::Index j = 0; j <= i; ++j) {
      for (std::size_t c = 0; c < d; ++c) b[c] = x_(j, static_cast<Eigen::Index>(c));
      k(i, j) = k(j, i) = kernel(h, a, b);
    }
  }
  // Escalating jitter until the factorization succeeds.
  double jitter = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd kk = k;
    kk.diagonal().array() += h.noise_var + jitter;
    llt.compute(kk);
    if (llt.info() == Eigen::Success) return true;
    jitter = jitter == 0.0 ? 1e-10 : jitter * 100.0;
  }
  return false;
}

double GpPosterior::log_marginal_likelihood(const GpHyper& h) const {
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!factorize(h, llt)) return -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd alpha = llt.solve(z_);
  const Eigen::MatrixXd l = llt.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  const double n = static_cast<double>(z_.size());
  return -0.5 * z_.dot(alpha) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

GpPosterior GpPosterior::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             const GpOptions& options) {
  if (x.rows() < 1 || x.rows() != y.size()) throw Error("fit_gp: need matching x and y");
  if (!y.allFinite()) throw Error("fit_gp: non-finite observation");
  GpPosterior gp;
  gp.x_ = x;
  const auto n = static_cast<double>(y.size());
  const auto dims = static_cast<std::size_t>(x.cols());
  gp.y_mean_ = y.mean();
  const double var = (y.array() - gp.y_mean_).square().sum() / n;
  gp.hyper_.length_scales.assign(dims, 0.3);
  gp.hyper_.signal_var = 1.0;
  gp.hyper_.noise_var = options.noise_floor;
  if (y.size() < 2 || !(var > 0.0)) {
    gp.prior_only_ = true;
    gp.warning_ = "degenerate observations; using the prior";
    gp.y_scale_ = 1.0;
    gp.z_ = Eigen::VectorXd::Zero(y.size());
    return gp;
  }
  gp.y_scale_ = std::sqrt(var);
  gp.z_ = (y.array() - gp.y_mean_) / gp.y_scale_;

  // theta = (log l_1..l_d, log sf2[, log noise]), clamped to the box.
  const bool fit_noise = options.fit_noise;
  const std::size_t p = dims + 1 + (fit_noise ? 1 : 0);
  std::vector<double> lo(p), hi(p);
  for (std::size_t d = 0; d < dims; ++d) {
    lo[d] = std::log(kGpMinLength);
    hi[d] = std::log(kGpMaxLength);
  }
  lo[dims] = std::log(kGpMinSignal);
  hi[dims] = std::log(kGpMaxSignal);
  if (fit_noise) {
    lo[dims + 1] = std::log(options.noise_floor);
    hi[dims + 1] = std::log(kGpMaxNoise);
  }
  auto to_hyper = [&](std::span<const double> t) {
    GpHyper h;
    h.length_scales.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) h.length_scales[d] = std::exp(std::clamp(t[d], lo[d], hi[d]));
    h.signal_var = std::exp(std::clamp(t[dims], lo[dims], hi[dims]));
    h.noise_var = fit_noise ? std::exp(std::clamp(t[dims + 1], lo[dims + 1], hi[dims + 1]))
                            : options.noise_floor;
    return h;
  };
  auto to_theta = [&](const GpHyper& h) {
    std::vector<double> t(p);
    for (std::size_t d = 0; d < dims; ++d) t[d] = std::log(h.length_scales[d]);
    t[dims] = std::log(h.signal_var);
    if (fit_noise) t[dims + 1] = std::log(std::max(h.noise_var, options.noise_floor));
    return t;
  };
  auto objective = [&](std::span<const double> t) {
    // Penalize leaving the box so the simplex stays inside it.
    double penalty = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      if (t[i] < lo[i]) penalty += (lo[i] - t[i]) * (lo[i] - t[i]);
      if (t[i] > hi[i]) penalty += (t[i] - hi[i]) * (t[i] - hi[i]);
    }
    return -gp.log_marginal_likelihood(to_hyper(t)) + 1e3 * penalty;
  };

  std::vector<std::vector<double>> starts;
  GpHyper def;
  def.length_scales.assign(dims, 0.3);
  def.signal_var = 1.0;
  def.noise_var = fit_noise ? 1e-4 : options.noise_floor;
  starts.push_back(to_theta(options.warm_start && options.warm_start->length_scales.size() == dims
                                ? *options.warm_start
                                : def));
  Rng rng(options.seed);
  std::vector<std::pair<double, std::vector<double>>> screened;
  for (int s = 0; s < options.screen_draws; ++s) {
    std::vector<double> t(p);
    for (std::size_t i = 0; i < p; ++i) t[i] = rng.uniform(lo[i], hi[i]);
    screened.emplace_back(objective(t), std::move(t));
  }
  std::sort(screened.begin(), screened.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (int s = 0; s < options.random_starts && s < static_cast<int>(screened.size()); ++s)
    starts.push_back(screened[static_cast<std::size_t>(s)].second);

  double best_f = std::numeric_limits<double>::infinity();
  std::vector<double> best_t = starts.front();
  for (const auto& s : starts) {
    double f = 0.0;
    auto t = nelder_mead(objective, s, 0.5, static_cast<int>(60 * p), &f);
    if (f < best_f) {
      best_f = f;
      best_t = t;
    }
  }
  gp.hyper_ = to_hyper(best_t);
  if (!gp.factorize(gp.hyper_, gp.llt_)) {
    gp.prior_only_ = true;
    gp.warning_ = "covariance factorization failed; using the prior";
    return gp;
  }
  gp.alpha_ = gp.llt_.solve(gp.z_);
  return gp;
}

GpPosterior::Prediction GpPosterior::predict(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != x_.cols())
    throw Error("gp predict: dimension mismatch");
  Prediction out;
  if (prior_only_) {
    out.mean = y_mean_;
    out.variance = hyper_.signal_var * y_scale_ * y_scale_;
    return out;
  }
  const auto n = x_.rows();
  Eigen::VectorXd k(n);
  std::vector<double> b(x.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < b.size(); ++c) b[c] = x_(i, static_cast<Eigen::Index>(c));
    k(i) = kernel(hyper_, x, b);
  }
  const double mean_z = k.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(k);
  const double var_z = std::max(0.0, hyper_.signal_var - v.squaredNorm());
  out.mean = y_mean_ + y_scale_ * mean_z;
  out.variance = var_z * y_scale_ * y_scale_;
  return out;
}

}  // namespace simvec
