// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace dualcas {

// SI constants used throughout. All internal quantities are SI:
// distances in m, angular frequencies in rad/s, energies in J,
// pressures in N/m^2, polarizabilities in C^2 m^2/J,
// magnetizabilities in J/T^2.
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s
inline constexpr double kEps0 = 8.8541878128e-12;     // F/m
inline constexpr double kMu0 =
    1.0 / (kEps0 * kSpeedOfLight * kSpeedOfLight);    // H/m

inline constexpr double kPi = 3.14159265358979323846;

// Tolerance for algebraic matrix identities (relative); rounding only.
inline constexpr double kTauAlg = 1e-12;

// Default relative tolerance for duality audits.
inline constexpr double kTauAudit = 1e-6;

// Coincidence guard for Green-tensor point pairs.
inline constexpr double kCoincidenceGuard = 1e-12; // m

} // namespace dualcas
