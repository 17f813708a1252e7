#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace simvec {

// Kernel hyper-parameters, all in standardized-y units.
struct GpHyper {
  std::vector<double> length_scales;
  double signal_var = 1.0;
  double noise_var = 1e-6;
};

struct GpOptions {
  int random_starts = 2;      // Nelder-Mead restarts besides the default/warm start
  int screen_draws = 32;      // random hyper-parameter draws screened for start points
  bool fit_noise = true;      // false: noise held at noise_floor
  double noise_floor = 1e-10;
  std::uint64_t seed = 0;
  std::optional<GpHyper> warm_start;
};

// Box (log space) searched for hyper-parameters.
inline constexpr double kGpMinLength = 1e-2, kGpMaxLength = 1e2;
inline constexpr double kGpMinSignal = 1e-2, kGpMaxSignal = 1e2;
inline constexpr double kGpMaxNoise = 1.0;

double matern52(double r);

// Minimizes f over R^n from x0 with the Nelder-Mead simplex method.
// Returns the best point; `fbest` receives its value.
std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& f,
                                std::vector<double> x0, double step, int max_evals,
                                double* fbest = nullptr);

class GpPosterior {
 public:
  // x: n points (rows) in the unit cube, y: observations. Throws if n < 1 or
  // a value is not finite.
  static GpPosterior fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const GpOptions& options = {});

  struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
  };
  // Mean and variance in the units of the training y; variance >= 0.
  Prediction predict(std::span<const double> x) const;

  // Log marginal likelihood of the standardized observations.
  double log_marginal_likelihood(const GpHyper& h) const;

  const GpHyper& hyper() const { return hyper_; }
  bool prior_only() const { return prior_only_; }
  const std::string& warning() const { return warning_; }
  double y_mean() const { return y_mean_; }
  double y_scale() const { return y_scale_; }
  // Signal variance in the units of the training y.
  double signal_variance() const { return hyper_.signal_var * y_scale_ * y_scale_; }

 private:
  double kernel(const GpHyper& h, std::span<const double> a, std::span<const double> b) const;
  bool factorize(const GpHyper& h, Eigen::LLT<Eigen::MatrixXd>& llt) const;

  Eigen::MatrixXd x_;
  Eigen::VectorXd z_;  // standardized y
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  GpHyper hyper_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  bool prior_only_ = false;
  std::string warning_;
};

}  // namespace simvec
