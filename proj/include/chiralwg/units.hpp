#pragma once

// Unit discipline: energies and detunings in μeV, times in ns, rates in ns⁻¹,
// powers in W, photon flux in photons per ns.
namespace chiralwg::units {

inline constexpr double kHbar = 0.6582119569;               // μeV·ns
inline constexpr double kJoulePerEv = 1.602176634e-19;      // exact (SI 2019)
inline constexpr double kSecondsPerNs = 1e-9;

inline constexpr double energy_to_rate(double micro_ev) { return micro_ev / kHbar; }
inline constexpr double rate_to_energy(double per_ns) { return per_ns * kHbar; }

}  // namespace chiralwg::units
