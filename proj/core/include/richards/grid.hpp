#pragma once

namespace richards {

/// Uniform space-time grid on (0,Z) x (0,T). Node i=0 is the soil surface,
/// i=Nz-1 the bottom of the column; depth is positive downward. Units are
/// cm and hours throughout.
struct Grid1D {
  double Z = 0.0;  // column depth, cm
  double T = 0.0;  // time horizon, h
  int Nz = 0;      // space nodes including both boundaries (>= 3)
  int Nt = 0;      // time levels including t = 0 (>= 2)

  double dz() const { return Z / (Nz - 1); }
  double dt() const { return T / (Nt - 1); }
  double z(int i) const { return i * dz(); }
  double t(int n) const { return n * dt(); }

  bool operator==(const Grid1D&) const = default;
};

}  // namespace richards
