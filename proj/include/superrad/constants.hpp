//---------------------------------------------------------------------------//
//! \file superrad/constants.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <numbers>

namespace superrad
{
//---------------------------------------------------------------------------//
/*!
 * CODATA 2018 values in SI units.
 *
 * The set is fixed at build time; reports print \c codata_release so that a
 * number can always be traced back to the constants that produced it.
 */
struct PhysicalConstants
{
    static constexpr char const* codata_release = "CODATA 2018";

    //! Speed of light [m/s], exact
    static constexpr double c = 299792458.0;
    //! Planck constant [J s], exact
    static constexpr double h = 6.62607015e-34;
    //! Reduced Planck constant [J s]
    static constexpr double hbar = h / (2 * std::numbers::pi);
    //! Unified atomic mass unit [kg]
    static constexpr double atomic_mass_unit = 1.66053906660e-27;
    //! Electron volt [J], exact
    static constexpr double electron_volt = 1.602176634e-19;
    //! Electron rest mass [kg]
    static constexpr double electron_mass = 9.1093837015e-31;
};

using constants = PhysicalConstants;

//---------------------------------------------------------------------------//
}  // namespace superrad
