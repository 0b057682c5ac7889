#include "chiralwg/fano.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "chiralwg/errors.hpp"

namespace chiralwg {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

Vec5 pack(const FanoParams& p) { return Vec5(p.y0, p.A, p.q, p.gamma, p.omega0); }
FanoParams unpack(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }

// The lineshape without the Γ > 0 precondition; the solver may cross Γ = 0 briefly
// in sign and folds it back at the end.
double shape(double q, double gamma, double x) {
  const double num = q * gamma + x;
  return num * num / (gamma * gamma + x * x);
}

struct Problem {
  std::vector<double> x;
  std::vector<double> y;
};

double residuals(const Problem& prob, const Vec5& p, Eigen::VectorXd& r) {
  const auto n = static_cast<Eigen::Index>(prob.x.size());
  r.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r[i] = p[0] + p[1] * shape(p[2], p[3], prob.x[i] - p[4]) - prob.y[i];
  }
  return r.squaredNorm();
}

void jacobian(const Problem& prob, const Vec5& p, Eigen::MatrixXd& J) {
  const auto n = static_cast<Eigen::Index>(prob.x.size());
  J.resize(n, 5);
  const double A = p[1], q = p[2], g = p[3];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = prob.x[i] - p[4];
    const double u = q * g + x;
    const double den = g * g + x * x;
    const double f = u * u / den;
    J(i, 0) = 1.0;
    J(i, 1) = f;
    J(i, 2) = A * 2.0 * u * g / den;
    J(i, 3) = A * (2.0 * u * q / den - 2.0 * g * f / den);
    J(i, 4) = A * (-2.0 * u / den + 2.0 * x * f / den);
  }
}

struct Run {
  Vec5 p;
  double rss = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

constexpr double kFtol = 1e-15;
constexpr double kXtol = 1e-13;
constexpr double kGtol = 1e-13;

Run levenberg_marquardt(const Problem& prob, Vec5 p) {
  Run run;
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  double rss = residuals(prob, p, r);
  if (!std::isfinite(rss)) return run;
  double lambda = 1e-3;
  Eigen::VectorXd r_trial;

  for (int it = 1; it <= kMaxIterationsPerStart; ++it) {
    run.iterations = it;
    if (rss == 0) {
      run.converged = true;
      break;
    }
    jacobian(prob, p, J);
    const Mat5 JtJ = J.transpose() * J;
    const Vec5 g = J.transpose() * r;
    const Vec5 scale = JtJ.diagonal().cwiseMax(1e-300).cwiseSqrt();

    // Scaled gradient test: cosine between residual and every column.
    const double rnorm = std::sqrt(rss);
    double gmax = 0;
    for (int k = 0; k < 5; ++k) gmax = std::max(gmax, std::abs(g[k]) / (scale[k] * rnorm));
    if (gmax <= kGtol) {
      run.converged = true;
      break;
    }

    bool accepted = false;
    while (!accepted) {
      Mat5 A = JtJ;
      A.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-300);
      const Vec5 step = A.ldlt().solve(-g);
      const Vec5 trial = p + step;
      const double trial_rss = residuals(prob, trial, r_trial);
      const bool finite = step.allFinite() && std::isfinite(trial_rss);

      if ((scale.asDiagonal() * step).norm() <= kXtol * ((scale.asDiagonal() * p).norm() + kXtol)) {
        run.converged = true;
        if (finite && trial_rss < rss) {
          p = trial;
          rss = trial_rss;
          r.swap(r_trial);
        }
        break;
      }
      if (finite && trial_rss < rss) {
        const double reduction = (rss - trial_rss) / rss;
        p = trial;
        rss = trial_rss;
        r.swap(r_trial);
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (reduction <= kFtol) run.converged = true;
      } else {
        lambda *= 10.0;
        // No descent even along an infinitesimal gradient step: stationary to
        // working precision.
        if (lambda > 1e20) {
          run.converged = true;
          break;
        }
      }
    }
    if (run.converged) break;
  }
  run.p = p;
  run.rss = rss;
  return run;
}

// Closed-form y0 and A for fixed (q, Γ, ω0).
Vec5 seed_linear(const Problem& prob, double q, double gamma, double omega0) {
  const auto n = static_cast<Eigen::Index>(prob.x.size());
  Eigen::MatrixXd B(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    B(i, 0) = 1.0;
    B(i, 1) = shape(q, gamma, prob.x[i] - omega0);
    y[i] = prob.y[i];
  }
  const Eigen::Vector2d c = B.colPivHouseholderQr().solve(y);
  return Vec5(c[0], c[1], q, gamma, omega0);
}

// ω0 candidates: the point of steepest slope and the point furthest from the
// median level, both on a 5-point moving average.
std::vector<double> omega_seeds(const Problem& prob) {
  const std::size_t n = prob.y.size();
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(n - 1, i + 2);
    double s = 0;
    for (std::size_t j = lo; j <= hi; ++j) s += prob.y[j];
    smooth[i] = s / static_cast<double>(hi - lo + 1);
  }
  std::size_t steepest = 1;
  double best_slope = -1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double slope = std::abs((smooth[i + 1] - smooth[i - 1]) / (prob.x[i + 1] - prob.x[i - 1]));
    if (slope > best_slope) {
      best_slope = slope;
      steepest = i;
    }
  }
  std::vector<double> sorted = smooth;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
  const double median = sorted[n / 2];
  std::size_t extremum = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(smooth[i] - median) > std::abs(smooth[extremum] - median)) extremum = i;
  }
  std::vector<double> seeds{prob.x[steepest]};
  if (extremum != steepest) seeds.push_back(prob.x[extremum]);
  return seeds;
}

FanoFit finish(const Problem& prob, const Run& run) {
  const Vec5 p = pack(canonical(unpack(run.p)));
  FanoFit fit;
  fit.params = unpack(p);
  Eigen::VectorXd r;
  fit.rss = residuals(prob, p, r);
  fit.converged = run.converged;
  fit.iterations = run.iterations;
  fit.points = prob.x.size();

  Eigen::MatrixXd J;
  jacobian(prob, p, J);
  const Mat5 JtJ = J.transpose() * J;
  const double dof = static_cast<double>(prob.x.size()) - 5.0;
  const Mat5 inv = JtJ.completeOrthogonalDecomposition().pseudoInverse();
  Mat5 cov = (fit.rss / dof) * inv;
  fit.covariance = 0.5 * (cov + cov.transpose());
  const Vec5 se = fit.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.stderr_ = unpack(se);
  return fit;
}

}  // namespace

void validate(const FanoParams& p) {
  for (double v : {p.y0, p.A, p.q, p.gamma, p.omega0}) {
    if (!std::isfinite(v)) throw InvalidParameter("fano", "parameters must be finite");
  }
  if (!(p.gamma > 0)) throw InvalidParameter("fano.gamma", "must be positive");
}

double fano_eval(const FanoParams& p, double omega) {
  return p.y0 + p.A * shape(p.q, p.gamma, omega - p.omega0);
}

FanoParams canonical(const FanoParams& params) {
  FanoParams p = params;
  if (p.gamma < 0) {
    p.gamma = -p.gamma;
    p.q = -p.q;
  }
  if (std::abs(p.q) > 1) {
    const double q2 = p.q * p.q;
    p.y0 += p.A * (1 + q2);
    p.A = -p.A * q2;
    p.q = -1 / p.q;
  }
  return p;
}

FanoFit fano_fit(const Spectrum& spectrum, FitWindow window, const std::optional<FanoParams>& init) {
  if (!(std::isfinite(window.lo) && std::isfinite(window.hi) && window.hi > window.lo)) {
    std::ostringstream msg;
    msg << "fit window [" << window.lo << ", " << window.hi << "] is empty or non-finite";
    throw DegenerateInput(msg.str());
  }
  Problem prob;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double x = spectrum.detunings()[i];
    if (x >= window.lo && x <= window.hi) {
      prob.x.push_back(x);
      prob.y.push_back(spectrum.values()[i]);
    }
  }
  if (prob.x.size() < kMinFitPoints) {
    throw DegenerateInput("fit window holds " + std::to_string(prob.x.size()) +
                          " points; at least " + std::to_string(kMinFitPoints) + " are required");
  }
  if (init) {
    validate(*init);
    return finish(prob, levenberg_marquardt(prob, pack(*init)));
  }

  const double gamma0 = (window.hi - window.lo) / 5.0;
  Run best;
  Run best_any;
  for (double omega0 : omega_seeds(prob)) {
    for (double q : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
      const Run run = levenberg_marquardt(prob, seed_linear(prob, q, gamma0, omega0));
      if (run.converged && run.rss < best.rss) best = run;
      if (run.rss < best_any.rss) best_any = run;
    }
  }
  const Run& chosen = std::isfinite(best.rss) ? best : best_any;
  if (!std::isfinite(chosen.rss)) throw DegenerateInput("every fit start produced non-finite residuals");
  return finish(prob, chosen);
}

double fano_contrast(const FanoFit& plus, const FanoFit& minus) {
  if (!plus.converged || !minus.converged) {
    throw DegenerateInput("contrast needs two converged fits");
  }
  const double sum = plus.params.A + minus.params.A;
  if (sum == 0) throw DegenerateInput("contrast undefined: amplitudes cancel");
  return (plus.params.A - minus.params.A) / sum;
}

std::optional<std::string> fano_contrast_warning(const FanoFit& plus, const FanoFit& minus) {
  if (plus.params.A * minus.params.A < 0) {
    std::ostringstream msg;
    msg << "branch amplitudes have opposite signs (" << plus.params.A << ", " << minus.params.A
        << "); contrast lies outside [-1, 1]";
    return msg.str();
  }
  return std::nullopt;
}

double pl_contrast(double i_plus, double i_minus) {
  if (!(i_plus >= 0) || !(i_minus >= 0)) {
    throw InvalidParameter("intensity", "must be non-negative");
  }
  const double sum = i_plus + i_minus;
  if (sum == 0) throw DegenerateInput("contrast undefined: both intensities are zero");
  return (i_plus - i_minus) / sum;
}

}  // namespace chiralwg
