#pragma once

namespace saptvqe {

// CODATA 2018 conversion; fixed so reports are bit-reproducible.
inline constexpr double kAngstromToBohr = 1.8897261254578281;
inline constexpr double kHartreeToKcalMol = 627.5094740631;

} // namespace saptvqe
