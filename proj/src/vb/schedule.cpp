#include "hotspot/vb/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace hotspot::vb {

AnnealingSchedule make_schedule(double t_hot, std::size_t n_temps, std::size_t sweeps_per_temp) {
  if (!(t_hot >= 1.0) || !std::isfinite(t_hot))
    throw std::domain_error("initial temperature must be >= 1");
  if (n_temps == 0) throw std::domain_error("schedule needs at least one temperature");
  if (sweeps_per_temp == 0) throw std::domain_error("sweeps_per_temp must be >= 1");
  AnnealingSchedule s;
  s.t_hot = t_hot;
  s.n_temps = n_temps;
  s.sweeps_per_temp = sweeps_per_temp;
  s.temperatures.resize(n_temps);
  if (n_temps == 1) {
    s.temperatures[0] = 1.0;
    return s;
  }
  // T_j = (1 + Delta)^{j-1} = t_hot^{(j-1)/(J-1)}; endpoints pinned exactly.
  const double jm1 = static_cast<double>(n_temps - 1);
  const double log_t = std::log(t_hot);
  for (std::size_t k = 0; k < n_temps; ++k) {
    const double j = static_cast<double>(n_temps - 1 - k);
    s.temperatures[k] = std::exp(log_t * j / jm1);
  }
  s.temperatures.front() = t_hot;
  s.temperatures.back() = 1.0;
  return s;
}

}  // namespace hotspot::vb
