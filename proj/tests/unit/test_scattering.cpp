#include <cmath>
#include <numbers>
#include <random>

#include "chiralwg/errors.hpp"
#include "chiralwg/params.hpp"
#include "chiralwg/scattering.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chiralwg;
using doctest::Approx;

namespace {

DirectionalRates default_strong() {
  return derive_rates(EmitterConfig{}, Branch::SigmaMinus, Direction::LtoR);
}

DirectionalRates make_rates(double gamma, double gf, double gb, double gperp) {
  return {gamma, gf, gb, gamma - gf - gb, gperp};
}

EmitterConfig ideal(double beta_d) {
  EmitterConfig e;
  e.beta = 1.0;
  e.beta_d_LR = beta_d;
  e.dephasing_tau_d = 1e300;  // no pure dephasing
  return e;
}

}  // namespace

TEST_SUITE("scattering") {

TEST_CASE("undriven ground state") {
  const auto s = bloch_steady_state(3.0, 0.0, default_strong());
  CHECK(s.sigma_minus == Complex(0, 0));
  CHECK(s.population == 0.0);
  CHECK(s.inversion == -1.0);
}

TEST_CASE("full saturation limit") {
  const auto s = bloch_steady_state(0.0, 1e7, default_strong());
  CHECK(s.population == Approx(0.5).epsilon(1e-9));
  CHECK(s.inversion == Approx(0.0).epsilon(1e-9));
}

TEST_CASE("resonant population without dephasing at s = 2") {
  // K = Ω²γ⊥/γ⊥² = 2, population K/(2(Γ + K)) = 1/3.
  const auto rates = make_rates(1.0, 0.5, 0.5, 0.5);
  const auto s = bloch_steady_state(0.0, 1.0, rates);
  CHECK(s.population == Approx(1.0 / 3.0).epsilon(1e-14));
  const auto ref = oracle::lindblad_steady_state(0.0, 1.0, 1.0, 0.5);
  CHECK(ref.population == Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("closed form matches the Lindblad master equation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double gamma = 0.1 + 5 * U(rng);
    const double gperp = gamma / 2 + 3 * U(rng);
    const double delta = -20 + 40 * U(rng);
    const double omega = 10 * U(rng);
    const auto rates = make_rates(gamma, 0.4 * gamma, 0.1 * gamma, gperp);
    const auto s = bloch_steady_state(delta, omega, rates);
    const auto ref = oracle::lindblad_steady_state(delta, omega, gamma, gperp);
    CHECK(std::abs(s.sigma_minus - ref.sigma_minus) < 1e-11);
    CHECK(std::abs(s.population - ref.population) < 1e-11);
    CHECK(s.population == Approx((1 + s.inversion) / 2).epsilon(1e-14));
    CHECK(std::norm(s.sigma_minus) <= s.population + 1e-15);
  }
}

TEST_CASE("weak transmission amplitude anchors") {
  const auto r = default_strong();
  CHECK(weak_transmission_amplitude(0.0, r).real() == Approx(0.40888888888888886).epsilon(1e-14));
  CHECK(weak_transmission_amplitude(0.0, r).imag() == 0.0);
  CHECK(std::abs(weak_transmission_amplitude(1e7, r) - 1.0) < 1e-6);
  for (double d : {0.3, 1.0, 4.0}) {
    const Complex tp = weak_transmission_amplitude(d, r);
    const Complex tm = weak_transmission_amplitude(-d, r);
    CHECK(std::abs(tm - std::conj(tp)) < 1e-15);
  }
}

TEST_CASE("weak amplitude agrees with the driven state at tiny drive") {
  const auto r = default_strong();
  for (double d : {-3.0, 0.0, 0.5, 2.0}) {
    const auto res = scatter(d, 1e-6, r);
    CHECK(std::abs(res.t_coherent - weak_transmission_amplitude(d, r)) < 1e-10);
  }
}

TEST_CASE("ideal chiral system: unit transmission with phase pi") {
  const auto r = derive_rates(ideal(1.0), Branch::SigmaMinus, Direction::LtoR);
  const Complex t = weak_transmission_amplitude(0.0, r);
  CHECK(std::abs(t) == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(std::abs(std::arg(t)) - std::numbers::pi) < 1e-9);
  CHECK(std::abs(weak_reflection_amplitude(0.0, r)) == 0.0);
}

TEST_CASE("ideal symmetric system: complete reflection") {
  const auto r = derive_rates(ideal(0.5), Branch::SigmaMinus, Direction::LtoR);
  CHECK(std::abs(weak_transmission_amplitude(0.0, r)) < 1e-12);
  CHECK(std::abs(weak_reflection_amplitude(0.0, r) + 1.0) < 1e-12);
  CHECK(scatter(0.0, 0.0, r).T < 1e-12);
}

TEST_CASE("lossless chiral-imperfect reflection") {
  EmitterConfig e = ideal(0.95);
  const auto r = derive_rates(e, Branch::SigmaMinus, Direction::LtoR);
  CHECK(std::norm(weak_reflection_amplitude(0.0, r)) == Approx(0.19).epsilon(1e-12));
}

TEST_CASE("reflection is symmetric under forward/backward exchange") {
  const auto r = default_strong();
  auto swapped = r;
  std::swap(swapped.gamma_f, swapped.gamma_b);
  for (double d : {0.0, 0.7, -2.0}) {
    CHECK(std::norm(weak_reflection_amplitude(d, r)) ==
          Approx(std::norm(weak_reflection_amplitude(d, swapped))).epsilon(1e-14));
    CHECK(scatter_at_flux(d, 0.0, r).R == Approx(scatter_at_flux(d, 0.0, swapped).R).epsilon(1e-13));
  }
}

TEST_CASE("perfect chirality never reflects") {
  auto r = default_strong();
  r.gamma_loss += r.gamma_b;
  r.gamma_b = 0;
  for (double flux : {0.0, 0.01, 5.0, 1e4}) {
    for (double d : {-3.0, 0.0, 1.0}) CHECK(scatter_at_flux(d, flux, r).R == 0.0);
  }
}

TEST_CASE("photon number conservation on a random grid") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double gamma = 0.1 + 5 * U(rng);
    const double gf = U(rng) * gamma;
    const double gb = U(rng) * (gamma - gf);
    const auto r = make_rates(gamma, gf, gb, gamma / 2 + 3 * U(rng));
    const auto res = scatter(-30 + 60 * U(rng), 20 * U(rng), r);
    CHECK(std::abs(res.T + res.R + res.L - 1.0) < 1e-9);
    CHECK(res.T >= -1e-15);
    CHECK(res.R >= 0.0);
    CHECK(res.L >= -1e-12);
  }
}

TEST_CASE("weak-drive T includes incoherent forward emission") {
  // T(0) = 1 − (Γ − γ_f)·(2γ_f/(Γγ⊥)) for the default strong branch.
  const auto r = default_strong();
  const auto res = scatter_at_flux(0.0, 0.0, r);
  CHECK(res.T == Approx(0.6039555555555556).epsilon(1e-13));
  CHECK(std::norm(res.t_coherent) == Approx(0.40888888888888886 * 0.40888888888888886));
}

TEST_CASE("saturation reduces the dip monotonically") {
  const auto r = default_strong();
  double previous = -1;
  for (double omega = 0; omega < 30; omega += 0.25) {
    const double T = scatter(0.0, omega, r).T;
    CHECK(T >= previous - 1e-14);
    previous = T;
  }
  const double weak = scatter(0.0, 0.0, r).T;
  const double one_nw = scatter(0.0, 3.573665876731067, r).T;
  CHECK(one_nw > weak + 0.2);
}

TEST_CASE("scatter at finite drive needs forward coupling") {
  auto r = default_strong();
  r.gamma_loss += r.gamma_f;
  r.gamma_f = 0;
  CHECK_THROWS_AS(scatter(0.0, 1.0, r), DegenerateInput);
  CHECK(scatter(0.0, 0.0, r).T == 1.0);
}

TEST_CASE("branch composition") {
  const auto strong = default_strong();
  const DirectionalRates decoupled{1.0, 0.0, 0.0, 1.0, 1.125};
  for (double d : {-2.0, 0.0, 1.5}) {
    const auto alone = scatter_at_flux(d, 0.01, strong);
    const auto both = compose_transitions(scatter_at_flux(d, 0.01, decoupled), alone);
    CHECK(both.T == Approx(alone.T).epsilon(1e-15));
    CHECK(both.R == Approx(alone.R).epsilon(1e-15));
    CHECK(std::abs(both.T + both.R + both.L - 1) < 1e-12);
  }
}

TEST_CASE("transmission midway between branches") {
  const EmitterConfig e;
  const auto plus = derive_rates(e, Branch::SigmaPlus, Direction::LtoR);
  const auto minus = derive_rates(e, Branch::SigmaMinus, Direction::LtoR);
  const auto res = compose_transitions(scatter_at_flux(0.0 + 80.0, 0.0, plus),
                                       scatter_at_flux(0.0 - 80.0, 0.0, minus));
  CHECK(res.T == Approx(0.99996).epsilon(1e-5));
  CHECK(std::abs(res.T - 1) < 1e-2);
}

TEST_CASE("branch separation warning") {
  EmitterConfig e;
  CHECK_FALSE(branch_separation_warning(e, Direction::LtoR).has_value());
  e.zeeman_splitting = 5.0;
  CHECK(branch_separation_warning(e, Direction::LtoR).has_value());
}

TEST_CASE("maximum phase shift") {
  const auto r = default_strong();
  const auto ps = max_phase_shift(r);
  CHECK(ps.delta_phi == Approx(0.43295873169992216).epsilon(1e-9));
  const double d_star = std::sqrt((1.125 - 0.665) * 1.125) * units::kHbar;
  CHECK(std::abs(ps.detuning) == Approx(d_star).epsilon(1e-6));
  CHECK(ps.abs_t == Approx(std::abs(weak_transmission_amplitude(ps.detuning, r))).epsilon(1e-12));

  EmitterConfig e;
  e.beta = 0.9;
  const auto high = max_phase_shift(derive_rates(e, Branch::SigmaMinus, Direction::LtoR));
  CHECK(high.delta_phi == Approx(0.6597296128381749).epsilon(1e-9));

  CHECK(max_phase_shift(derive_rates(ideal(1.0), Branch::SigmaMinus, Direction::LtoR)).delta_phi ==
        Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(max_phase_shift(make_rates(1.0, 0.6, 0.0, 0.6)).delta_phi ==
        Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("phase shift under the full-rate convention is about 0.24 rad") {
  auto r = default_strong();
  r.gamma_perp = coherence_decay(1.0, 0.8, DephasingConvention::FullRate);
  const double gp = r.gamma_perp, gf = r.gamma_f;
  const double ds = std::sqrt((gp - gf) * gp);
  const double expected = std::atan(ds / (gp - gf)) - std::atan(ds / gp);
  CHECK(max_phase_shift(r).delta_phi == Approx(expected).epsilon(1e-9));
  CHECK(expected == Approx(0.24).epsilon(0.05));
}

}
