#ifndef QWDIRAC_WALK_HPP
#define QWDIRAC_WALK_HPP

#include <cstdint>

#include "qwdirac/coin.hpp"
#include "qwdirac/lattice.hpp"

namespace qwd {

// One walk step on the periodic lattice:
//
//   Psi_{j+1,m} = B_{j,m} [ psi^L_{j,m+1} ]
//                         [ psi^R_{j,m-1} ]
//
// so the left component streams leftward (picks up its value from m+1) and
// the right component streams rightward. With theta = 0 the coin is diagonal
// and the two components pass through each other unchanged.
void step_s1_into(const SpinorField& in, const CoinRow& coins, SpinorField& out);
SpinorField step_s1(const SpinorField& in, const CoinRow& coins);
SpinorField step_s1(const SpinorField& in, const AngleField& field, int j);

// Advance nsteps steps in place starting at time index j0, reusing one
// scratch buffer across the whole loop.
void evolve_s1(SpinorField& state, const AngleField& field, int j0, int nsteps);

// Precomputed coefficients of the two-step update
//
//   psi^L_{j+2,m} = AL psi^L_{j,m+2} + BL psi^L_{j,m} + CL psi^R_{j,m} + DL psi^R_{j,m-2}
//   psi^R_{j+2,m} = AR psi^L_{j,m+2} + BR psi^L_{j,m} + CR psi^R_{j,m} + DR psi^R_{j,m-2}
//
// obtained by composing the step at row j with the step at row j+1. Each
// vector is indexed by the target site m.
struct S2Coefficients {
    int n = 0;
    std::vector<cplx> AL, BL, CL, DL;
    std::vector<cplx> AR, BR, CR, DR;
};

S2Coefficients build_s2_coefficients(const AngleField& field, const Lattice& lat, int j);
SpinorField step_s2(const SpinorField& in, const S2Coefficients& co);

// Local phase change Psi'_{j,m} = Psi_{j,m} exp(-i phi(j, m)). The site index
// is wrapped before phi is evaluated.
struct GaugePhase {
    std::function<double(int, int)> phi;
};

SpinorField gauge_transform(const SpinorField& in, const GaugePhase& phase, int j);

// Angle set that drives the transformed state with the same dynamics:
//   alpha' = alpha + (phi_{j,m+1} + phi_{j,m-1} - 2 phi_{j+1,m}) / 2
//   xi'    = xi + (phi_{j,m+1} - phi_{j,m-1}) / 2
//   zeta'  = zeta - (phi_{j,m+1} - phi_{j,m-1}) / 2
// The result is lattice-bound (row_override): sample it with sample_angles or
// build_coin_row. Its closed-form members throw if called directly.
AngleField gauge_transform_angles(const AngleField& base, const GaugePhase& phase,
                                  const Lattice& lat);

// Unit-norm state with independent complex gaussian entries, reproducible
// from the seed.
SpinorField random_state(const Lattice& lat, std::uint64_t seed);

} // namespace qwd

#endif
