#pragma once

#include <stdexcept>

// Angular-momentum algebra: Wigner 3j and 6j symbols and the hyperfine
// dipole matrix element <F mF| x.eps_q* |F' mF'> built from them.
namespace latqc {

// An angular momentum (or projection) stored as twice its value, so
// half-integers are exact and selection rules are integer comparisons.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;

  static constexpr HalfInteger from_twice(int twice) {
    HalfInteger h;
    h.twice_ = twice;
    return h;
  }
  static constexpr HalfInteger from_int(int n) { return from_twice(2 * n); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr HalfInteger operator-() const { return from_twice(-twice_); }

  friend constexpr bool operator==(HalfInteger a, HalfInteger b) {
    return a.twice_ == b.twice_;
  }
  friend constexpr bool operator!=(HalfInteger a, HalfInteger b) {
    return a.twice_ != b.twice_;
  }
  friend constexpr bool operator<(HalfInteger a, HalfInteger b) {
    return a.twice_ < b.twice_;
  }

 private:
  int twice_ = 0;
};

// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Selection-rule failures
// (m1+m2+m3 != 0, triangle violation, non-integer perimeter, |m|>j)
// return exactly 0; no input is an error.
double wigner_3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                 HalfInteger m1, HalfInteger m2, HalfInteger m3);

// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; 0 when any triad fails.
double wigner_6j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                 HalfInteger j4, HalfInteger j5, HalfInteger j6);

// <F mF| x.eps_q* |F' mF'> for a hyperfine dipole transition, in meters.
// reduced_element_m is <J||x||J'| as a dipole length; spherical basis
// eps_0 = z, eps_{+-1} = -+(x +- iy)/sqrt(2). The bra carries (F, mF, J)
// of the lower state, the ket (Fp, mFp, Jp) of the upper state.
// Throws std::invalid_argument for structurally invalid sublevels
// (|mF| > F, or a phase exponent that is not an integer).
double hyperfine_dipole_element(HalfInteger F, HalfInteger mF, HalfInteger J,
                                HalfInteger Fp, HalfInteger mFp,
                                HalfInteger Jp, int q,
                                double reduced_element_m,
                                HalfInteger nuclear_spin);

}  // namespace latqc
