#pragma once

// Brute-force Racah factorial-sum evaluation of 3j/6j symbols with plain
// long-double factorials (no log scaling). Test-only reference path, kept
// independent of src/angular.cpp. Arguments are doubled integers (2j, 2m).
#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace wigner_oracle {

inline long double fact(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline bool triad_ok(int a, int b, int c) {
  if ((a + b + c) % 2 != 0) return false;
  return c <= a + b && c >= std::abs(a - b);
}

inline long double threej(int J1, int J2, int J3, int M1, int M2, int M3) {
  if (J1 < 0 || J2 < 0 || J3 < 0) return 0.0L;
  if (M1 + M2 + M3 != 0) return 0.0L;
  if (std::abs(M1) > J1 || std::abs(M2) > J2 || std::abs(M3) > J3) return 0.0L;
  if ((J1 + M1) % 2 || (J2 + M2) % 2 || (J3 + M3) % 2) return 0.0L;
  if (!triad_ok(J1, J2, J3)) return 0.0L;

  const long double tri = fact((J1 + J2 - J3) / 2) * fact((J1 - J2 + J3) / 2) *
                          fact((-J1 + J2 + J3) / 2) /
                          fact((J1 + J2 + J3) / 2 + 1);
  const long double proj = fact((J1 + M1) / 2) * fact((J1 - M1) / 2) *
                           fact((J2 + M2) / 2) * fact((J2 - M2) / 2) *
                           fact((J3 + M3) / 2) * fact((J3 - M3) / 2);

  const int t_min = std::max({0, (J2 - J3 - M1) / 2, (J1 - J3 + M2) / 2});
  const int t_max = std::min({(J1 + J2 - J3) / 2, (J1 - M1) / 2, (J2 + M2) / 2});
  long double sum = 0.0L;
  for (int t = t_min; t <= t_max; ++t) {
    long double den = fact(t) * fact((J1 + J2 - J3) / 2 - t) *
                      fact((J1 - M1) / 2 - t) * fact((J2 + M2) / 2 - t) *
                      fact((J3 - J2 + M1) / 2 + t) *
                      fact((J3 - J1 - M2) / 2 + t);
    sum += ((t % 2) ? -1.0L : 1.0L) / den;
  }
  long double sign = (((J1 - J2 - M3) / 2) % 2) ? -1.0L : 1.0L;
  return sign * std::sqrt(tri * proj) * sum;
}

inline long double sixj(int J1, int J2, int J3, int J4, int J5, int J6) {
  if (J1 < 0 || J2 < 0 || J3 < 0 || J4 < 0 || J5 < 0 || J6 < 0) return 0.0L;
  if (!triad_ok(J1, J2, J3) || !triad_ok(J1, J5, J6) || !triad_ok(J4, J2, J6) ||
      !triad_ok(J4, J5, J3))
    return 0.0L;

  auto tri = [](int a, int b, int c) {
    return fact((a + b - c) / 2) * fact((a - b + c) / 2) *
           fact((-a + b + c) / 2) / fact((a + b + c) / 2 + 1);
  };
  const long double pref = std::sqrt(tri(J1, J2, J3) * tri(J1, J5, J6) *
                                     tri(J4, J2, J6) * tri(J4, J5, J3));
  const int a1 = (J1 + J2 + J3) / 2, a2 = (J1 + J5 + J6) / 2;
  const int a3 = (J4 + J2 + J6) / 2, a4 = (J4 + J5 + J3) / 2;
  const int b1 = (J1 + J2 + J4 + J5) / 2, b2 = (J2 + J3 + J5 + J6) / 2;
  const int b3 = (J1 + J3 + J4 + J6) / 2;
  long double sum = 0.0L;
  for (int t = std::max({a1, a2, a3, a4}); t <= std::min({b1, b2, b3}); ++t) {
    long double term = fact(t + 1) /
                       (fact(t - a1) * fact(t - a2) * fact(t - a3) *
                        fact(t - a4) * fact(b1 - t) * fact(b2 - t) *
                        fact(b3 - t));
    sum += ((t % 2) ? -1.0L : 1.0L) * term;
  }
  return pref * sum;
}

// Wigner-Eckart hyperfine dipole element evaluated entirely through the
// oracle's own 3j/6j sums. Doubled-int arguments, q in {-1,0,+1}.
inline long double dipole_element(int F2, int mF2, int J2x, int Fp2, int mFp2,
                                  int Jp2, int q, long double reduced,
                                  int I2) {
  const int phase_half = (J2x + I2 + mF2) / 2;
  const long double sign = (phase_half % 2) ? -1.0L : 1.0L;
  const long double deg =
      std::sqrt(static_cast<long double>(F2 + 1) * (Fp2 + 1) * (J2x + 1));
  return reduced * sign * deg * threej(F2, 2, Fp2, mF2, 2 * q, -mFp2) *
         sixj(J2x, Jp2, 2, Fp2, F2, I2);
}

}  // namespace wigner_oracle
