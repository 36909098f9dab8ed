#include <cmath>
#include <sstream>

#include "optomech/calibration.hpp"

namespace optomech {

double air_absorption_db_per_m(double frequency, const AirState& air) {
  const double T = air.temperature;
  const double p = air.pressure;
  const double hr = air.relative_humidity;
  if (!(T >= 253.15 && T <= 323.15) || !(hr >= 0.0 && hr <= 100.0) || !(p > 0.0 && p <= 2e5)) {
    fail(ErrorKind::OutOfRange, "air absorption: state outside -20..50 C, 0..100 %RH, p <= 200 kPa");
  }
  if (frequency == 0.0) return 0.0;
  const double fp = frequency / p;
  if (!(fp >= 4e-4 && fp <= 10.0)) {
    std::ostringstream os;
    os << "air absorption: f/p = " << fp << " Hz/Pa outside the model range [4e-4, 10]";
    fail(ErrorKind::OutOfRange, os.str());
  }
  constexpr double kRefTemp = 293.15;
  constexpr double kTriplePoint = 273.16;
  const double pr = p / kStandardAtmosphere;
  const double tr = T / kRefTemp;

  // molar concentration of water vapour, %
  const double psat = std::pow(10.0, -6.8346 * std::pow(kTriplePoint / T, 1.261) + 4.6151);
  const double h = hr * psat / pr;

  const double fr_o = pr * (24.0 + 4.04e4 * h * (0.02 + h) / (0.391 + h));
  const double fr_n =
      pr / std::sqrt(tr) * (9.0 + 280.0 * h * std::exp(-4.170 * (std::pow(tr, -1.0 / 3.0) - 1.0)));

  const double f2 = frequency * frequency;
  const double classical = 1.84e-11 / pr * std::sqrt(tr);
  const double oxygen = 0.01275 * std::exp(-2239.1 / T) / (fr_o + f2 / fr_o);
  const double nitrogen = 0.1068 * std::exp(-3352.0 / T) / (fr_n + f2 / fr_n);
  return 8.686 * f2 * (classical + std::pow(tr, -2.5) * (oxygen + nitrogen));
}

}  // namespace optomech
