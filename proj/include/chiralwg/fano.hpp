#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "chiralwg/spectrum.hpp"

namespace chiralwg {

// y(ω) = y0 + A·(qΓ + ω − ω0)² / (Γ² + (ω − ω0)²). Energies in μeV.
struct FanoParams {
  double y0 = 0;
  double A = 0;
  double q = 0;
  double gamma = 1;
  double omega0 = 0;

  bool operator==(const FanoParams&) const = default;
};

void validate(const FanoParams& params);

double fano_eval(const FanoParams& params, double omega);

// The lineshape cannot distinguish (y0, A, q) from
// (y0 + A(1 + q²), −A·q², −1/q): both expand to the same background,
// Lorentzian and dispersive parts. This picks the |q| ≤ 1 member (Γ > 0),
// which keeps A > 0 for dips, so fitted amplitudes are comparable.
FanoParams canonical(const FanoParams& params);

struct FanoFit {
  FanoParams params;
  Eigen::Matrix<double, 5, 5> covariance = Eigen::Matrix<double, 5, 5>::Zero();
  FanoParams stderr_;  // one standard error per parameter, same layout
  double rss = 0;
  bool converged = false;
  int iterations = 0;  // of the winning start
  std::size_t points = 0;
};

struct FitWindow {
  double lo = 0;
  double hi = 0;
};

inline constexpr std::size_t kMinFitPoints = 10;
inline constexpr int kMaxIterationsPerStart = 500;

// Levenberg-Marquardt on all five parameters, uniform weights. Without `init`
// the solver is started from every q ∈ {−2, −0.5, 0, 0.5, 2} at two ω0 seeds
// (steepest-slope point and extremum), Γ at a fifth of the window, and the
// best converged result wins. Parameters are reported in canonical form.
FanoFit fano_fit(const Spectrum& spectrum, FitWindow window,
                 const std::optional<FanoParams>& init = std::nullopt);

// (A⁺ − A⁻)/(A⁺ + A⁻) on signed amplitudes. Throws DegenerateInput when
// either fit is unconverged or the amplitudes cancel.
double fano_contrast(const FanoFit& fit_plus, const FanoFit& fit_minus);

// Set when the amplitudes have opposite signs; the contrast is then outside
// [−1, 1] and only reported as-is.
std::optional<std::string> fano_contrast_warning(const FanoFit& fit_plus, const FanoFit& fit_minus);

// (I⁺ − I⁻)/(I⁺ + I⁻) for non-negative intensities.
double pl_contrast(double i_plus, double i_minus);

}  // namespace chiralwg
