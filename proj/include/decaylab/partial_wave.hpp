#pragma once

// Mode-l Green's function factors. For lambda > 0 and the outgoing sign
//   free:      g(r, r') = i lambda j_l(lambda r<) h_l(lambda r>)
//   Dirichlet: g(r, r') = i lambda [j_l - c h_l](lambda r<) h_l(lambda r>),  c = j_l(lambda a) / h_l(lambda a)
// and at zero energy
//   free:      g(r, r') = r<^l / ((2l+1) r>^(l+1))
//   Dirichlet: g(r, r') = (r<^l - a^(2l+1) r<^-(l+1)) / ((2l+1) r>^(l+1)).
// The incoming sign is the complex conjugate.

#include "decaylab/core_model.hpp"

namespace decaylab {

enum class Sign { plus, minus };

inline const char* to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

struct PartialWave {
  Eigen::VectorXcd a, b;    // g = a(r<) b(r>)
  Eigen::VectorXcd da, db;  // d/dlambda of a, b (empty unless requested)
};

/// Outgoing factors on the grid nodes; dirichlet selects the reflected solution at radius a.
PartialWave partial_wave(const RadialGrid& grid, int l, double lambda, bool dirichlet, bool derivatives);

}  // namespace decaylab
