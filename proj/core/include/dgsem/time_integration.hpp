#pragma once

// Five-stage, fourth-order, two-register low-storage Runge-Kutta
// (Carpenter & Kennedy 1994, solution 3).

#include <array>
#include <sstream>
#include <vector>

#include "dgsem/types.hpp"

namespace dgsem::time {

struct LowStorageCoefficients {
  std::array<double, 5> a;
  std::array<double, 5> b;
  std::array<double, 5> c;
};

inline constexpr LowStorageCoefficients kCarpenterKennedy54{
    {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
     -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0},
    {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0, 1720146321549.0 / 2090206949498.0,
     3134564353537.0 / 4481467310338.0, 2277821191437.0 / 14882151754819.0},
    {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
     2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0}};

/// Advances `u` by dt. Field must expose `values` (std::vector of double or State)
/// and `time`; rhs(const Field&, Field& rate) fills rate.values. `register_field`
/// and `rate` are scratch fields shaped like `u`. A PositivityError raised at any
/// stage is rethrown with the stage time and index.
template <class Field, class Rhs>
void lsrk_step(Field& u, double dt, Rhs&& rhs, Field& register_field, Field& rate) {
  const auto& rk = kCarpenterKennedy54;
  const double t0 = u.time;
  register_field.values.assign(u.values.size(), typename decltype(u.values)::value_type{});
  for (int s = 0; s < 5; ++s) {
    u.time = t0 + rk.c[s] * dt;
    try {
      rhs(static_cast<const Field&>(u), rate);
    } catch (const PositivityError& err) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "positivity failure in RK stage " << s << " at t = " << t0 + rk.c[s] * dt << ": " << err.what();
      throw PositivityError(msg.str());
    }
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      auto& k = register_field.values[i];
      k *= rk.a[s];
      k += dt * rate.values[i];
      u.values[i] += rk.b[s] * k;
    }
  }
  u.time = t0 + dt;
}

}  // namespace dgsem::time
