#pragma once

#include <functional>
#include <span>
#include <vector>

namespace chiralwg {

// Probabilists' Gauss-Hermite rule: ∫ f(z) φ(z) dz ≈ Σ wᵢ f(zᵢ) with φ the
// standard normal density, so the weights sum to one. Exact for polynomials of
// degree ≤ 2N−1. Nodes are symmetric; odd orders carry a node at z = 0.
class GaussHermiteRule {
 public:
  explicit GaussHermiteRule(int order);

  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Process-wide cache; rules are immutable once built. Thread-safe.
const GaussHermiteRule& cached_gauss_hermite_rule(int order);

using OffsetFunction = std::function<double(double)>;

// E[fn(σZ)], Z ~ N(0,1), with the given Gauss-Hermite rule. σ = 0 returns
// fn(0) exactly. Accurate only when fn varies on scales ≳ σ/√order.
double gauss_hermite_average(const OffsetFunction& fn, double sigma, const GaussHermiteRule& rule);

// E[fn(σZ)] by adaptive Gauss-Kronrod on unit panels of Z over [−9, 9]
// (truncated mass < 3e-19). Resolves features much narrower than σ.
double adaptive_gaussian_average(const OffsetFunction& fn, double sigma,
                                 double relative_tolerance = 1e-12);

}  // namespace chiralwg
