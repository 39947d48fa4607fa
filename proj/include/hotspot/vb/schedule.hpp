#pragma once

#include <cstddef>
#include <vector>

namespace hotspot::vb {

/// Geometric temperature ladder T_J > ... > T_1 = 1.
struct AnnealingSchedule {
  double t_hot = 1.0;
  std::size_t n_temps = 1;
  std::size_t sweeps_per_temp = 1;
  std::vector<double> temperatures;  // hottest first, last element exactly 1
};

/// Throws std::domain_error if t_hot < 1 or n_temps == 0.
AnnealingSchedule make_schedule(double t_hot, std::size_t n_temps,
                                std::size_t sweeps_per_temp = 1);

}  // namespace hotspot::vb
