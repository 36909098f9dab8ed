#pragma once

namespace optomech {

struct FresnelPair {
  double c = 0.0;  // C(x) = int_0^x cos(pi t^2 / 2) dt
  double s = 0.0;  // S(x) = int_0^x sin(pi t^2 / 2) dt
};

/// Normalized Fresnel integrals. Power series for |x| <= 1.5, continued
/// fraction of the complementary error function beyond. Odd in x.
FresnelPair fresnel_integrals(double x);

}  // namespace optomech
