#include "optomech/fresnel.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "optomech/error.hpp"
#include "optomech/units.hpp"

namespace optomech {

FresnelPair fresnel_integrals(double x) {
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 200;
  const double t = std::abs(x);
  FresnelPair r;
  if (t == 0.0) return r;

  if (t <= 1.5) {
    // term_k = (pi t^2 / 2)^k / k! * t / (2k + 1); even k feed C, odd k feed S.
    const double u = 0.5 * kPi * t * t;
    double power = t;  // (pi t^2/2)^k / k! * t
    double c = 0.0, s = 0.0;
    for (int k = 0; k < kMaxIter; ++k) {
      if (k > 0) power *= u / k;
      const double term = power / (2 * k + 1);
      const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
      if (k % 2 == 0) {
        c += sign * term;
      } else {
        s += sign * term;
      }
      if (term < kEps * std::abs(k % 2 == 0 ? c : s)) break;
    }
    r.c = c;
    r.s = s;
  } else {
    // Modified Lentz evaluation of the erfc continued fraction.
    using cplx = std::complex<double>;
    constexpr double kTiny = std::numeric_limits<double>::min() * 1e10;
    cplx b(1.0, -kPi * t * t);
    cplx cc = 1.0 / kTiny;
    cplx d = 1.0 / b;
    cplx h = d;
    int n = -1;
    int k = 2;
    for (; k < kMaxIter; ++k) {
      n += 2;
      const double a = -static_cast<double>(n) * (n + 1);
      b += 4.0;
      d = 1.0 / (a * d + b);
      cc = b + a / cc;
      const cplx del = cc * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    if (k >= kMaxIter) fail(ErrorKind::Diverged, "Fresnel continued fraction did not converge");
    h *= cplx(t, -t);
    const double arg = 0.5 * kPi * t * t;
    const cplx cs = cplx(0.5, 0.5) * (1.0 - cplx(std::cos(arg), std::sin(arg)) * h);
    r.c = cs.real();
    r.s = cs.imag();
  }
  if (x < 0.0) {
    r.c = -r.c;
    r.s = -r.s;
  }
  return r;
}

}  // namespace optomech
