#include "chiralwg/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "chiralwg/errors.hpp"

namespace chiralwg {

GaussHermiteRule::GaussHermiteRule(int order) {
  if (order < 1) throw InvalidParameter("quadrature_order", "must be >= 1");

  // Golub-Welsch nodes: eigenvalues of the Jacobi matrix of the monic
  // probabilists' Hermite recurrence He_{k+1} = z He_k − k He_{k−1}, which has
  // zero diagonal and off-diagonal √k.
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd off(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Gauss-Hermite eigen-decomposition failed");
  }

  // Weights from the Christoffel function 1/Σ p_k(z)² over the orthonormal
  // polynomials p_k = He_k/√k!. This is O(N²) where eigenvectors would be
  // O(N³). Sums that outgrow the double range belong to nodes whose weight
  // is below e^(−690) and are set to zero.
  nodes_.resize(order);
  weights_.resize(order);
  for (int i = 0; i < order; ++i) {
    const double z = solver.eigenvalues()[i];
    double p_prev = 0;
    double p = 1;
    double sum = 1;
    bool underflow = false;
    for (int k = 1; k < order && !underflow; ++k) {
      const double p_next = (z * p - std::sqrt(static_cast<double>(k - 1)) * p_prev) /
                            std::sqrt(static_cast<double>(k));
      p_prev = p;
      p = p_next;
      sum += p * p;
      underflow = !(sum < 1e300);
    }
    nodes_[i] = z;
    weights_[i] = underflow ? 0.0 : 1.0 / sum;
  }

  // Symmetrise to remove rounding asymmetry; pin the centre node for odd N.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double z = 0.5 * (nodes_[j] - nodes_[i]);
    const double w = 0.5 * (weights_[i] + weights_[j]);
    nodes_[i] = -z;
    nodes_[j] = z;
    weights_[i] = weights_[j] = w;
  }
  if (order % 2 == 1) nodes_[order / 2] = 0.0;

  double total = 0;
  for (double w : weights_) total += w;
  for (double& w : weights_) w /= total;
}

const GaussHermiteRule& cached_gauss_hermite_rule(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const GaussHermiteRule>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const GaussHermiteRule>(order);
  return *slot;
}

double gauss_hermite_average(const OffsetFunction& fn, double sigma, const GaussHermiteRule& rule) {
  if (!(sigma >= 0)) throw InvalidParameter("sigma", "must be >= 0");
  if (sigma == 0) return fn(0.0);
  double sum = 0;
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * fn(sigma * nodes[i]);
  return sum;
}

double adaptive_gaussian_average(const OffsetFunction& fn, double sigma, double relative_tolerance) {
  if (!(sigma >= 0)) throw InvalidParameter("sigma", "must be >= 0");
  if (sigma == 0) return fn(0.0);

  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr int kHalfRange = 9;
  constexpr unsigned kMaxDepth = 20;
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrand = [&](double z) { return norm * std::exp(-0.5 * z * z) * fn(sigma * z); };

  double sum = 0;
  for (int k = -kHalfRange; k < kHalfRange; ++k) {
    sum += Kronrod::integrate(integrand, static_cast<double>(k), static_cast<double>(k + 1),
                              kMaxDepth, relative_tolerance);
  }
  return sum;
}

}  // namespace chiralwg
