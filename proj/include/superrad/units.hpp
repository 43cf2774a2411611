//---------------------------------------------------------------------------//
//! \file superrad/units.hpp
//! Compile-time dimensioned quantities and unit-suffix parsing.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <compare>
#include <string>
#include <string_view>
#include <type_traits>

#include "constants.hpp"
#include "error.hpp"

namespace superrad
{
//---------------------------------------------------------------------------//
/*!
 * SI value tagged with its length, mass and time exponents.
 *
 * Products and quotients carry the exponents along; a product whose
 * exponents all cancel decays to a plain \c double, so dimensionless
 * results (solid angles, optical densities, gains) need no unwrapping.
 */
template<int L, int M, int T>
class Quantity
{
  public:
    static constexpr int length_exp = L;
    static constexpr int mass_exp = M;
    static constexpr int time_exp = T;

    constexpr Quantity() = default;
    constexpr explicit Quantity(double si) : value_(si) {}

    //! Value in SI base units
    constexpr double si() const { return value_; }

    constexpr Quantity& operator+=(Quantity rhs)
    {
        value_ += rhs.value_;
        return *this;
    }
    constexpr Quantity& operator-=(Quantity rhs)
    {
        value_ -= rhs.value_;
        return *this;
    }
    constexpr Quantity& operator*=(double s)
    {
        value_ *= s;
        return *this;
    }
    constexpr Quantity& operator/=(double s)
    {
        value_ /= s;
        return *this;
    }

    friend constexpr Quantity operator+(Quantity a, Quantity b)
    {
        return Quantity{a.value_ + b.value_};
    }
    friend constexpr Quantity operator-(Quantity a, Quantity b)
    {
        return Quantity{a.value_ - b.value_};
    }
    friend constexpr Quantity operator-(Quantity a)
    {
        return Quantity{-a.value_};
    }
    friend constexpr Quantity operator*(double s, Quantity a)
    {
        return Quantity{s * a.value_};
    }
    friend constexpr Quantity operator*(Quantity a, double s)
    {
        return Quantity{a.value_ * s};
    }
    friend constexpr Quantity operator/(Quantity a, double s)
    {
        return Quantity{a.value_ / s};
    }

    friend constexpr auto operator<=>(Quantity, Quantity) = default;

  private:
    double value_{0};
};

namespace detail
{
template<int L, int M, int T>
constexpr auto make_quantity(double v)
{
    if constexpr (L == 0 && M == 0 && T == 0)
        return v;
    else
        return Quantity<L, M, T>{v};
}
}  // namespace detail

template<int L1, int M1, int T1, int L2, int M2, int T2>
constexpr auto operator*(Quantity<L1, M1, T1> a, Quantity<L2, M2, T2> b)
{
    return detail::make_quantity<L1 + L2, M1 + M2, T1 + T2>(a.si() * b.si());
}

template<int L1, int M1, int T1, int L2, int M2, int T2>
constexpr auto operator/(Quantity<L1, M1, T1> a, Quantity<L2, M2, T2> b)
{
    return detail::make_quantity<L1 - L2, M1 - M2, T1 - T2>(a.si() / b.si());
}

template<int L, int M, int T>
constexpr auto operator/(double s, Quantity<L, M, T> a)
{
    return Quantity<-L, -M, -T>{s / a.si()};
}

template<int L, int M, int T>
constexpr auto square(Quantity<L, M, T> a)
{
    return a * a;
}

template<int L, int M, int T>
inline bool isfinite(Quantity<L, M, T> a)
{
    return std::isfinite(a.si());
}

using Length = Quantity<1, 0, 0>;
using Area = Quantity<2, 0, 0>;
using InverseLength = Quantity<-1, 0, 0>;
using NumberDensity = Quantity<-3, 0, 0>;
using Mass = Quantity<0, 1, 0>;
using Time = Quantity<0, 0, 1>;
using Rate = Quantity<0, 0, -1>;
using Speed = Quantity<1, 0, -1>;
using Momentum = Quantity<1, 1, -1>;
using Energy = Quantity<2, 1, -2>;
using Action = Quantity<2, 1, -1>;

//---------------------------------------------------------------------------//
// UNIT TABLE
//---------------------------------------------------------------------------//
//! Physical dimension named in documents and error messages
enum class Dimension
{
    count,
    length,
    area,
    number_density,
    mass,
    time,
    rate,
    speed,
    momentum,
    energy,
};

inline char const* to_string(Dimension d)
{
    switch (d)
    {
        case Dimension::count: return "count";
        case Dimension::length: return "length";
        case Dimension::area: return "area";
        case Dimension::number_density: return "number density";
        case Dimension::mass: return "mass";
        case Dimension::time: return "time";
        case Dimension::rate: return "rate";
        case Dimension::speed: return "speed";
        case Dimension::momentum: return "momentum";
        case Dimension::energy: return "energy";
    }
    return "?";
}

template<class Q>
struct DimensionOf;
template<>
struct DimensionOf<double>
{
    static constexpr Dimension value = Dimension::count;
};
template<>
struct DimensionOf<Length>
{
    static constexpr Dimension value = Dimension::length;
};
template<>
struct DimensionOf<Area>
{
    static constexpr Dimension value = Dimension::area;
};
template<>
struct DimensionOf<NumberDensity>
{
    static constexpr Dimension value = Dimension::number_density;
};
template<>
struct DimensionOf<Mass>
{
    static constexpr Dimension value = Dimension::mass;
};
template<>
struct DimensionOf<Time>
{
    static constexpr Dimension value = Dimension::time;
};
template<>
struct DimensionOf<Rate>
{
    static constexpr Dimension value = Dimension::rate;
};
template<>
struct DimensionOf<Speed>
{
    static constexpr Dimension value = Dimension::speed;
};
template<>
struct DimensionOf<Momentum>
{
    static constexpr Dimension value = Dimension::momentum;
};
template<>
struct DimensionOf<Energy>
{
    static constexpr Dimension value = Dimension::energy;
};

struct UnitInfo
{
    std::string_view symbol;
    Dimension dimension;
    double to_si;
};

namespace detail
{
inline constexpr double eV = constants::electron_volt;
inline constexpr double amu = constants::atomic_mass_unit;

// The first entry of each dimension is its SI unit, used on output.
inline constexpr std::array unit_table{
    UnitInfo{"m", Dimension::length, 1.0},
    UnitInfo{"km", Dimension::length, 1e3},
    UnitInfo{"cm", Dimension::length, 1e-2},
    UnitInfo{"mm", Dimension::length, 1e-3},
    UnitInfo{"um", Dimension::length, 1e-6},
    UnitInfo{"μm", Dimension::length, 1e-6},
    UnitInfo{"nm", Dimension::length, 1e-9},
    UnitInfo{"pm", Dimension::length, 1e-12},
    UnitInfo{"fm", Dimension::length, 1e-15},
    UnitInfo{"m^2", Dimension::area, 1.0},
    UnitInfo{"cm^2", Dimension::area, 1e-4},
    UnitInfo{"m^-3", Dimension::number_density, 1.0},
    UnitInfo{"1/m^3", Dimension::number_density, 1.0},
    UnitInfo{"cm^-3", Dimension::number_density, 1e6},
    UnitInfo{"1/cm^3", Dimension::number_density, 1e6},
    UnitInfo{"kg", Dimension::mass, 1.0},
    UnitInfo{"g", Dimension::mass, 1e-3},
    UnitInfo{"u", Dimension::mass, amu},
    UnitInfo{"s", Dimension::time, 1.0},
    UnitInfo{"ms", Dimension::time, 1e-3},
    UnitInfo{"us", Dimension::time, 1e-6},
    UnitInfo{"μs", Dimension::time, 1e-6},
    UnitInfo{"ns", Dimension::time, 1e-9},
    UnitInfo{"ps", Dimension::time, 1e-12},
    UnitInfo{"fs", Dimension::time, 1e-15},
    UnitInfo{"min", Dimension::time, 60.0},
    UnitInfo{"h", Dimension::time, 3600.0},
    UnitInfo{"d", Dimension::time, 86400.0},
    UnitInfo{"1/s", Dimension::rate, 1.0},
    UnitInfo{"s^-1", Dimension::rate, 1.0},
    UnitInfo{"Hz", Dimension::rate, 1.0},
    UnitInfo{"m/s", Dimension::speed, 1.0},
    UnitInfo{"km/s", Dimension::speed, 1e3},
    UnitInfo{"cm/s", Dimension::speed, 1e-2},
    UnitInfo{"mm/s", Dimension::speed, 1e-3},
    UnitInfo{"kg*m/s", Dimension::momentum, 1.0},
    UnitInfo{"eV/c", Dimension::momentum, eV / constants::c},
    UnitInfo{"keV/c", Dimension::momentum, 1e3 * eV / constants::c},
    UnitInfo{"MeV/c", Dimension::momentum, 1e6 * eV / constants::c},
    UnitInfo{"J", Dimension::energy, 1.0},
    UnitInfo{"eV", Dimension::energy, eV},
    UnitInfo{"keV", Dimension::energy, 1e3 * eV},
    UnitInfo{"MeV", Dimension::energy, 1e6 * eV},
    UnitInfo{"GeV", Dimension::energy, 1e9 * eV},
};
}  // namespace detail

//! Look up a unit symbol; returns nullptr if unknown
inline UnitInfo const* find_unit(std::string_view symbol)
{
    for (auto const& u : detail::unit_table)
    {
        if (u.symbol == symbol)
            return &u;
    }
    return nullptr;
}

//! SI unit symbol used when writing a dimension back out
inline std::string_view si_symbol(Dimension d)
{
    for (auto const& u : detail::unit_table)
    {
        if (u.dimension == d)
            return u.symbol;
    }
    return {};
}

namespace detail
{
inline std::string_view trim(std::string_view s)
{
    auto const ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view text)
{
    double v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DomainError("malformed number '" + std::string(text) + "'");
    return v;
}
}  // namespace detail

/*!
 * Parse "<number> <unit>" into SI.
 *
 * A count takes a bare number. Every other dimension requires a unit
 * suffix; bare numbers are rejected because a silent unit slip is the most
 * likely input error for these scenarios.
 */
template<class Q>
Q parse_quantity(std::string_view text)
{
    constexpr Dimension dim = DimensionOf<Q>::value;
    text = detail::trim(text);
    auto space = text.find_first_of(" \t");
    if constexpr (dim == Dimension::count)
    {
        if (space != std::string_view::npos)
            throw DomainError("count '" + std::string(text)
                              + "' must be a bare number");
        return detail::parse_number(text);
    }
    else
    {
        if (space == std::string_view::npos)
            throw DomainError("'" + std::string(text) + "' lacks a "
                              + to_string(dim) + " unit suffix");
        double number = detail::parse_number(text.substr(0, space));
        auto symbol = detail::trim(text.substr(space));
        auto const* unit = find_unit(symbol);
        if (!unit)
            throw DomainError("unknown unit suffix '" + std::string(symbol)
                              + "'");
        if (unit->dimension != dim)
            throw DomainError("unit '" + std::string(symbol) + "' is a "
                              + to_string(unit->dimension) + ", expected "
                              + to_string(dim));
        return Q{number * unit->to_si};
    }
}

//! Full-precision text in SI units that parse_quantity reads back exactly
template<class Q>
std::string format_quantity(Q q)
{
    char buf[64];
    double v;
    if constexpr (std::is_same_v<Q, double>)
        v = q;
    else
        v = q.si();
    auto [ptr, ec] = std::to_chars(
        buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    std::string out(buf, ptr);
    if constexpr (!std::is_same_v<Q, double>)
    {
        out += ' ';
        out += si_symbol(DimensionOf<Q>::value);
    }
    return out;
}

//---------------------------------------------------------------------------//
// LITERALS
//---------------------------------------------------------------------------//
namespace literals
{
#define SUPERRAD_UNIT_LITERAL(SUFFIX, TYPE, FACTOR)                        \
    constexpr TYPE operator""_##SUFFIX(long double v)                     \
    {                                                                      \
        return TYPE{static_cast<double>(v) * (FACTOR)};                    \
    }                                                                      \
    constexpr TYPE operator""_##SUFFIX(unsigned long long v)              \
    {                                                                      \
        return TYPE{static_cast<double>(v) * (FACTOR)};                    \
    }

SUPERRAD_UNIT_LITERAL(m, Length, 1.0)
SUPERRAD_UNIT_LITERAL(cm, Length, 1e-2)
SUPERRAD_UNIT_LITERAL(mm, Length, 1e-3)
SUPERRAD_UNIT_LITERAL(um, Length, 1e-6)
SUPERRAD_UNIT_LITERAL(nm, Length, 1e-9)
SUPERRAD_UNIT_LITERAL(pm, Length, 1e-12)
SUPERRAD_UNIT_LITERAL(cm2, Area, 1e-4)
SUPERRAD_UNIT_LITERAL(per_cm3, NumberDensity, 1e6)
SUPERRAD_UNIT_LITERAL(per_m3, NumberDensity, 1.0)
SUPERRAD_UNIT_LITERAL(kg, Mass, 1.0)
SUPERRAD_UNIT_LITERAL(u, Mass, constants::atomic_mass_unit)
SUPERRAD_UNIT_LITERAL(s, Time, 1.0)
SUPERRAD_UNIT_LITERAL(ms, Time, 1e-3)
SUPERRAD_UNIT_LITERAL(us, Time, 1e-6)
SUPERRAD_UNIT_LITERAL(ns, Time, 1e-9)
SUPERRAD_UNIT_LITERAL(ps, Time, 1e-12)
SUPERRAD_UNIT_LITERAL(fs, Time, 1e-15)
SUPERRAD_UNIT_LITERAL(min, Time, 60.0)
SUPERRAD_UNIT_LITERAL(h, Time, 3600.0)
SUPERRAD_UNIT_LITERAL(d, Time, 86400.0)
SUPERRAD_UNIT_LITERAL(per_s, Rate, 1.0)
SUPERRAD_UNIT_LITERAL(m_per_s, Speed, 1.0)
SUPERRAD_UNIT_LITERAL(mm_per_s, Speed, 1e-3)
SUPERRAD_UNIT_LITERAL(km_per_s, Speed, 1e3)
SUPERRAD_UNIT_LITERAL(J, Energy, 1.0)
SUPERRAD_UNIT_LITERAL(eV, Energy, constants::electron_volt)
SUPERRAD_UNIT_LITERAL(keV, Energy, 1e3 * constants::electron_volt)
SUPERRAD_UNIT_LITERAL(MeV, Energy, 1e6 * constants::electron_volt)

#undef SUPERRAD_UNIT_LITERAL
}  // namespace literals

//---------------------------------------------------------------------------//
}  // namespace superrad
