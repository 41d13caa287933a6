#include "latqc/angular.hpp"

#include <algorithm>
#include <cmath>

namespace latqc {

namespace {

// log(n!) for the halved (integer) quantities of the Racah sums.
long double lfact(int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

bool triangle_ok(int J1, int J2, int J3) {
  // doubled units; perimeter must also be an even doubled integer
  if ((J1 + J2 + J3) % 2 != 0) return false;
  return J3 <= J1 + J2 && J3 >= std::abs(J1 - J2);
}

// log of the triangle coefficient Delta(j1 j2 j3), doubled-int arguments
long double log_triangle(int J1, int J2, int J3) {
  return lfact((J1 + J2 - J3) / 2) + lfact((J1 - J2 + J3) / 2) +
         lfact((-J1 + J2 + J3) / 2) - lfact((J1 + J2 + J3) / 2 + 1);
}

}  // namespace

double wigner_3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                 HalfInteger m1, HalfInteger m2, HalfInteger m3) {
  const int J1 = j1.twice(), J2 = j2.twice(), J3 = j3.twice();
  const int M1 = m1.twice(), M2 = m2.twice(), M3 = m3.twice();

  if (J1 < 0 || J2 < 0 || J3 < 0) return 0.0;
  if (M1 + M2 + M3 != 0) return 0.0;
  if (std::abs(M1) > J1 || std::abs(M2) > J2 || std::abs(M3) > J3) return 0.0;
  if ((J1 + M1) % 2 != 0 || (J2 + M2) % 2 != 0 || (J3 + M3) % 2 != 0)
    return 0.0;
  if (!triangle_ok(J1, J2, J3)) return 0.0;

  // Racah sum over the halved quantities (all integers from here on)
  const int t_min = std::max({0, (J2 - J3 - M1) / 2, (J1 - J3 + M2) / 2});
  const int t_max =
      std::min({(J1 + J2 - J3) / 2, (J1 - M1) / 2, (J2 + M2) / 2});
  if (t_min > t_max) return 0.0;

  const long double log_pref =
      0.5L * (log_triangle(J1, J2, J3) + lfact((J1 + M1) / 2) +
              lfact((J1 - M1) / 2) + lfact((J2 + M2) / 2) +
              lfact((J2 - M2) / 2) + lfact((J3 + M3) / 2) +
              lfact((J3 - M3) / 2));

  long double sum = 0.0L;
  for (int t = t_min; t <= t_max; ++t) {
    const long double log_den =
        lfact(t) + lfact((J1 + J2 - J3) / 2 - t) + lfact((J1 - M1) / 2 - t) +
        lfact((J2 + M2) / 2 - t) + lfact((J3 - J2 + M1) / 2 + t) +
        lfact((J3 - J1 - M2) / 2 + t);
    sum += parity_sign(t) * std::exp(log_pref - log_den);
  }
  return static_cast<double>(parity_sign((J1 - J2 - M3) / 2) * sum);
}

double wigner_6j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                 HalfInteger j4, HalfInteger j5, HalfInteger j6) {
  const int J1 = j1.twice(), J2 = j2.twice(), J3 = j3.twice();
  const int J4 = j4.twice(), J5 = j5.twice(), J6 = j6.twice();

  if (J1 < 0 || J2 < 0 || J3 < 0 || J4 < 0 || J5 < 0 || J6 < 0) return 0.0;
  if (!triangle_ok(J1, J2, J3) || !triangle_ok(J1, J5, J6) ||
      !triangle_ok(J4, J2, J6) || !triangle_ok(J4, J5, J3))
    return 0.0;

  const int a1 = (J1 + J2 + J3) / 2, a2 = (J1 + J5 + J6) / 2;
  const int a3 = (J4 + J2 + J6) / 2, a4 = (J4 + J5 + J3) / 2;
  const int b1 = (J1 + J2 + J4 + J5) / 2, b2 = (J2 + J3 + J5 + J6) / 2;
  const int b3 = (J1 + J3 + J4 + J6) / 2;

  const int t_min = std::max({a1, a2, a3, a4});
  const int t_max = std::min({b1, b2, b3});
  if (t_min > t_max) return 0.0;

  const long double log_pref =
      0.5L * (log_triangle(J1, J2, J3) + log_triangle(J1, J5, J6) +
              log_triangle(J4, J2, J6) + log_triangle(J4, J5, J3));

  long double sum = 0.0L;
  for (int t = t_min; t <= t_max; ++t) {
    const long double log_term = lfact(t + 1) - lfact(t - a1) - lfact(t - a2) -
                                 lfact(t - a3) - lfact(t - a4) -
                                 lfact(b1 - t) - lfact(b2 - t) -
                                 lfact(b3 - t);
    sum += parity_sign(t) * std::exp(log_pref + log_term);
  }
  return static_cast<double>(sum);
}

double hyperfine_dipole_element(HalfInteger F, HalfInteger mF, HalfInteger J,
                                HalfInteger Fp, HalfInteger mFp,
                                HalfInteger Jp, int q,
                                double reduced_element_m,
                                HalfInteger nuclear_spin) {
  if (q < -1 || q > 1) throw std::invalid_argument("polarization index q must be -1, 0 or +1");
  if (F.twice() < 0 || std::abs(mF.twice()) > F.twice() ||
      (F.twice() + mF.twice()) % 2 != 0)
    throw std::invalid_argument("invalid (F, mF) sublevel");
  if (Fp.twice() < 0 || std::abs(mFp.twice()) > Fp.twice() ||
      (Fp.twice() + mFp.twice()) % 2 != 0)
    throw std::invalid_argument("invalid (F', mF') sublevel");

  const int phase_2x = J.twice() + nuclear_spin.twice() + mF.twice();
  if (phase_2x % 2 != 0)
    throw std::invalid_argument("J + I + mF is not an integer");

  const HalfInteger one = HalfInteger::from_int(1);
  const double threej = wigner_3j(F, one, Fp, mF, HalfInteger::from_int(q), -mFp);
  const double sixj = wigner_6j(J, Jp, one, Fp, F, nuclear_spin);
  const double degeneracy = std::sqrt(static_cast<double>(F.twice() + 1) *
                                      (Fp.twice() + 1) * (J.twice() + 1));
  return reduced_element_m * parity_sign(phase_2x / 2) * degeneracy * threej *
         sixj;
}

}  // namespace latqc
