#pragma once

// Physical constants (CODATA 2018). All internal quantities are SI:
// angular frequencies in rad/s, lengths in m, masses in kg, energies in J.
// Unit conversion happens only at file/CLI boundaries.
namespace latqc::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double h_planck = 6.62607015e-34;    // J s
inline constexpr double c_light = 2.99792458e8;       // m/s
inline constexpr double eps0 = 8.8541878128e-12;      // F/m
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double e_charge = 1.602176634e-19;   // C
inline constexpr double a0_bohr = 5.29177210903e-11;  // m
inline constexpr double alpha_fs = 7.2973525693e-3;   // fine-structure constant

}  // namespace latqc::constants
