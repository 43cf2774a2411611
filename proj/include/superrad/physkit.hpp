//---------------------------------------------------------------------------//
//! \file superrad/physkit.hpp
//! Emitter and sample descriptions plus the single-formula quantities
//! (wavelengths, recoils, solid angles, mode counts, coherence times).
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "constants.hpp"
#include "error.hpp"
#include "units.hpp"

namespace superrad
{
//---------------------------------------------------------------------------//
// EMITTER
//---------------------------------------------------------------------------//
enum class ParticleKind
{
    photon,
    neutrino,
    annihilation_pair,
};

inline char const* to_string(ParticleKind k)
{
    switch (k)
    {
        case ParticleKind::photon: return "photon";
        case ParticleKind::neutrino: return "neutrino";
        case ParticleKind::annihilation_pair: return "annihilation_pair";
    }
    return "?";
}

inline std::optional<ParticleKind> particle_kind_from(std::string_view s)
{
    if (s == "photon")
        return ParticleKind::photon;
    if (s == "neutrino")
        return ParticleKind::neutrino;
    if (s == "annihilation_pair")
        return ParticleKind::annihilation_pair;
    return std::nullopt;
}

//---------------------------------------------------------------------------//
/*!
 * One decay branch of the parent.
 *
 * The natural rate and half-life are stored together; whichever one the
 * caller supplies, the other is derived so that rate * half_life = ln 2.
 * The optional daughter lifetime is the secondary (cascade) decay of the
 * daughter atom, which can cut the coherence time short.
 */
class EmissionChannel
{
  public:
    static EmissionChannel from_half_life(ParticleKind kind,
                                          Energy energy,
                                          Time half_life,
                                          Mass parent_mass,
                                          std::optional<Time> daughter = {},
                                          std::string label = {})
    {
        if (!(half_life.si() > 0) || !isfinite(half_life))
            throw ValidationError("half_life", "must be positive and finite");
        return EmissionChannel(kind,
                               energy,
                               Rate{std::numbers::ln2 / half_life.si()},
                               half_life,
                               parent_mass,
                               daughter,
                               std::move(label));
    }

    static EmissionChannel from_rate(ParticleKind kind,
                                     Energy energy,
                                     Rate natural_rate,
                                     Mass parent_mass,
                                     std::optional<Time> daughter = {},
                                     std::string label = {})
    {
        if (!(natural_rate.si() > 0) || !isfinite(natural_rate))
            throw ValidationError("natural_rate",
                                  "must be positive and finite");
        return EmissionChannel(kind,
                               energy,
                               natural_rate,
                               Time{std::numbers::ln2 / natural_rate.si()},
                               parent_mass,
                               daughter,
                               std::move(label));
    }

    ParticleKind kind() const { return kind_; }
    Energy energy() const { return energy_; }
    Rate natural_rate() const { return natural_rate_; }
    Time half_life() const { return half_life_; }
    Mass parent_mass() const { return parent_mass_; }
    std::optional<Time> daughter_lifetime() const { return daughter_; }
    std::string const& label() const { return label_; }

    //! Copy with a different emitted energy (for sweeps)
    EmissionChannel with_energy(Energy e) const
    {
        EmissionChannel c = *this;
        c.energy_ = e;
        c.validate();
        return c;
    }

    //! Copy with a heavier (or lighter) parent
    EmissionChannel with_parent_mass(Mass m) const
    {
        EmissionChannel c = *this;
        c.parent_mass_ = m;
        c.validate();
        return c;
    }

    friend bool operator==(EmissionChannel const&, EmissionChannel const&)
        = default;

  private:
    EmissionChannel(ParticleKind kind,
                    Energy energy,
                    Rate rate,
                    Time half_life,
                    Mass mass,
                    std::optional<Time> daughter,
                    std::string label)
        : kind_(kind)
        , energy_(energy)
        , natural_rate_(rate)
        , half_life_(half_life)
        , parent_mass_(mass)
        , daughter_(daughter)
        , label_(std::move(label))
    {
        validate();
    }

    void validate() const
    {
        if (!(energy_.si() > 0) || !isfinite(energy_))
            throw ValidationError("energy", "must be positive and finite");
        if (!(parent_mass_.si() > 0) || !isfinite(parent_mass_))
            throw ValidationError("parent_mass",
                                  "must be positive and finite");
        if (daughter_ && (!(daughter_->si() > 0) || !isfinite(*daughter_)))
            throw ValidationError("daughter_lifetime",
                                  "must be positive and finite");
    }

    ParticleKind kind_;
    Energy energy_;
    Rate natural_rate_;
    Time half_life_;
    Mass parent_mass_;
    std::optional<Time> daughter_;
    std::string label_;
};

//---------------------------------------------------------------------------//
// SAMPLE
//---------------------------------------------------------------------------//
/*!
 * Condensate or cloud shape: diameter d, length l, atom number N and
 * density n, tied together by n = N / (d^2 l).
 */
class SampleGeometry
{
  public:
    static constexpr double consistency_tolerance = 1e-9;

    //! Derive the density from the atom number
    static SampleGeometry
    from_atom_number(Length diameter, Length length, double atom_number)
    {
        check_shape(diameter, length);
        check_positive("atom_number", atom_number);
        auto volume = square(diameter) * length;
        return SampleGeometry(
            diameter, length, atom_number, atom_number / volume);
    }

    //! Derive the atom number from the density
    static SampleGeometry
    from_density(Length diameter, Length length, NumberDensity density)
    {
        check_shape(diameter, length);
        check_positive("density", density.si());
        double n_atoms = density * square(diameter) * length;
        return SampleGeometry(diameter, length, n_atoms, density);
    }

    //! All four given: they must agree to \c consistency_tolerance
    static SampleGeometry from_all(Length diameter,
                                   Length length,
                                   double atom_number,
                                   NumberDensity density)
    {
        auto g = from_atom_number(diameter, length, atom_number);
        check_positive("density", density.si());
        double rel = std::abs(density.si() - g.density().si())
                     / g.density().si();
        if (rel > consistency_tolerance)
            throw ValidationError(
                "density",
                "density * diameter^2 * length disagrees with atom_number "
                "(relative mismatch "
                    + std::to_string(rel) + ")");
        return SampleGeometry(diameter, length, atom_number, density);
    }

    Length diameter() const { return diameter_; }
    Length length() const { return length_; }
    double atom_number() const { return atom_number_; }
    NumberDensity density() const { return density_; }

    friend bool operator==(SampleGeometry const&, SampleGeometry const&)
        = default;

  private:
    SampleGeometry(Length d, Length l, double n_atoms, NumberDensity n)
        : diameter_(d), length_(l), atom_number_(n_atoms), density_(n)
    {
    }

    static void check_positive(char const* field, double v)
    {
        if (!(v > 0) || !std::isfinite(v))
            throw ValidationError(field, "must be positive and finite");
    }
    static void check_shape(Length d, Length l)
    {
        check_positive("diameter", d.si());
        check_positive("length", l.si());
    }

    Length diameter_;
    Length length_;
    double atom_number_;
    NumberDensity density_;
};

//---------------------------------------------------------------------------//
// SINGLE-FORMULA QUANTITIES
//---------------------------------------------------------------------------//
//! Wavelength hc/E of a massless particle of energy E
inline Length photon_wavelength(Energy e)
{
    if (!(e.si() > 0))
        throw DomainError("photon_wavelength: energy must be positive");
    return Length{constants::h * constants::c / e.si()};
}

//! Inverse of photon_wavelength
inline Energy photon_energy(Length wavelength)
{
    if (!(wavelength.si() > 0))
        throw DomainError("photon_energy: wavelength must be positive");
    return Energy{constants::h * constants::c / wavelength.si()};
}

//! Momentum transfer k = E / (hbar c)
inline InverseLength wavenumber(Energy e)
{
    return InverseLength{e.si() / (constants::hbar * constants::c)};
}

struct RecoilResult
{
    Speed velocity;
    //! Set above 1% of c, where the nonrelativistic formula degrades
    bool relativistic{false};
};

/*!
 * Daughter recoil speed E/(m c).
 *
 * An annihilation pair leaves no daughter and the two quanta are emitted
 * back to back, so the only net motion is that of the source itself:
 * the optional source momentum spread divided by the parent mass.
 */
inline RecoilResult
recoil_velocity(EmissionChannel const& channel, Momentum source_spread = {})
{
    Speed v;
    if (channel.kind() == ParticleKind::annihilation_pair)
        v = source_spread / channel.parent_mass();
    else
        v = Speed{channel.energy().si()
                  / (channel.parent_mass().si() * constants::c)};
    return {v, v.si() > 0.01 * constants::c};
}

//! Recoil speed for a bare (E, m) pair; E = 0 gives 0
inline Speed recoil_velocity(Energy e, Mass m)
{
    return Speed{e.si() / (m.si() * constants::c)};
}

//! End-fire coherent solid angle (lambda/d)^2, unit prefactor
inline double coherent_solid_angle(Length wavelength, Length diameter)
{
    if (!(wavelength.si() > 0) || !(diameter.si() > 0))
        throw DomainError("coherent_solid_angle: lengths must be positive");
    double r = wavelength.si() / diameter.si();
    return r * r;
}

//! Side-mode solid angle lambda^2/(d l); geometry taken as given
inline double
side_mode_solid_angle(Length wavelength, Length diameter, Length length)
{
    if (!(wavelength.si() > 0) || !(diameter.si() > 0) || !(length.si() > 0))
        throw DomainError("side_mode_solid_angle: lengths must be positive");
    return square(wavelength) / (diameter * length);
}

/*!
 * Transverse phase-space mode count d^2/lambda^2.
 *
 * Real-valued (counts exceed 2^53 in sweeps). A sample narrower than the
 * wavelength is a single Dicke mode, so the count saturates at 1.
 */
inline double mode_count(Length diameter, Length wavelength)
{
    if (!(wavelength.si() > 0) || !(diameter.si() > 0))
        throw DomainError("mode_count: lengths must be positive");
    if (diameter.si() < wavelength.si())
        return 1.0;
    double r = diameter.si() / wavelength.si();
    return r * r;
}

//! Number of partial waves sum_{l <= floor(d/lambda)} (2l+1)
inline double partial_wave_count(Length diameter, Length wavelength)
{
    if (!(wavelength.si() > 0) || !(diameter.si() >= 0))
        throw DomainError("partial_wave_count: invalid lengths");
    double ratio = diameter.si() / wavelength.si();
    // Absorb one-ulp shortfalls such as 3e-6/1e-12 = 2999999.9999999995
    double l_max = std::floor(ratio * (1 + 8 * std::numeric_limits<double>::epsilon()));
    return (l_max + 1) * (l_max + 1);
}

//! Optical density n lambda^2 l
inline double
optical_density(NumberDensity density, Length wavelength, Length length)
{
    return density * square(wavelength) * length;
}

//! Hydrogen 2p->1s lifetime scaled by Z^-4
inline Time hydrogenic_cascade_lifetime(int z)
{
    if (z < 1)
        throw DomainError("hydrogenic_cascade_lifetime: Z must be >= 1");
    constexpr double hydrogen_2p = 1.6e-9;
    double z2 = double(z) * double(z);
    return Time{hydrogen_2p / (z2 * z2)};
}

//! Condensate velocity spread hbar/(m l)
inline Speed condensate_velocity_spread(Mass m, Length l)
{
    return Speed{constants::hbar / (m.si() * l.si())};
}

//! Doppler width k dv (angular frequency) for momentum transfer at energy E
inline Rate doppler_width(Energy e, Speed velocity_spread)
{
    return Rate{wavenumber(e).si() * velocity_spread.si()};
}

//! Photon momentum spread from annihilation of a source with spread dp
inline Momentum annihilation_momentum_spread(Momentum source_spread)
{
    if (source_spread.si() < 0)
        throw DomainError(
            "annihilation_momentum_spread: spread must be non-negative");
    return source_spread / 2.0;
}

//---------------------------------------------------------------------------//
// COHERENCE
//---------------------------------------------------------------------------//
//! Channel names used in CoherenceBudget::channels
namespace coherence_channel
{
inline constexpr char const* photon_transit = "photon_transit";
inline constexpr char const* atom_transit = "atom_transit";
inline constexpr char const* cascade = "daughter_cascade";
inline constexpr char const* doppler = "doppler";
inline constexpr char const* natural = "natural_decay";
inline constexpr char const* explicit_tau = "explicit";
}  // namespace coherence_channel

/*!
 * Competing coherence times and the loss rate they produce.
 *
 * Loss combination: the daughter-side channels (motional dephasing and
 * cascade decay) act on the same atomic coherence, so their rates add.
 * Motional dephasing is one process seen two ways, recoil transit or
 * Doppler width, and counts once at the faster of the two. The emitted
 * field and the atomic coherence are two modes; the faster one is
 * adiabatically eliminated and the slower one carries the memory, so
 * L = min(L_atomic, c/l). Finally L is floored at the natural rate.
 */
struct CoherenceBudget
{
    std::map<std::string, Time> channels;
    //! Channel that sets loss_rate
    std::string dominant;
    //! Shortest candidate time, whether or not it limits the gain
    std::string shortest;
    Rate loss_rate;
    bool natural_floor_applied{false};

    Time coherence_time() const { return 1.0 / loss_rate; }
};

namespace detail
{
//! Strictly shorter beyond rounding; for a condensate the recoil transit
//! and Doppler times agree analytically and differ only in the last bits
inline bool is_shorter(Time a, Time b)
{
    return a.si() < b.si() * (1 - 1e-12);
}

inline Rate atomic_loss_rate(std::map<std::string, Time> const& ch,
                             std::string* dominant)
{
    namespace cc = coherence_channel;
    std::optional<Time> motional;
    std::string motional_name;
    for (char const* name : {cc::atom_transit, cc::doppler})
    {
        auto it = ch.find(name);
        if (it != ch.end() && (!motional || is_shorter(it->second, *motional)))
        {
            motional = it->second;
            motional_name = name;
        }
    }
    double rate = 0;
    double best = 0;
    if (motional)
    {
        rate += 1 / motional->si();
        best = 1 / motional->si();
        *dominant = motional_name;
    }
    if (auto it = ch.find(cc::cascade); it != ch.end())
    {
        rate += 1 / it->second.si();
        if (1 / it->second.si() > best)
            *dominant = cc::cascade;
    }
    return Rate{rate};
}
}  // namespace detail

/*!
 * Assemble every coherence-time candidate for a channel in a sample.
 *
 * Without an explicit velocity spread the Doppler time uses the condensate
 * spread hbar/(m l), which makes it equal to the recoil transit time.
 */
inline CoherenceBudget
coherence_budget(EmissionChannel const& channel,
                 SampleGeometry const& geom,
                 std::optional<Speed> velocity_spread = {})
{
    namespace cc = coherence_channel;
    CoherenceBudget b;
    Length l = geom.length();
    b.channels[cc::photon_transit] = Time{l.si() / constants::c};

    auto recoil = recoil_velocity(channel);
    if (recoil.velocity.si() > 0)
        b.channels[cc::atom_transit] = l / recoil.velocity;

    if (auto d = channel.daughter_lifetime())
        b.channels[cc::cascade] = *d;

    Speed dv = velocity_spread.value_or(
        condensate_velocity_spread(channel.parent_mass(), l));
    if (dv.si() > 0)
        b.channels[cc::doppler] = 1.0 / doppler_width(channel.energy(), dv);

    auto shortest = std::min_element(
        b.channels.begin(), b.channels.end(), [](auto const& a, auto const& c) {
            return a.second < c.second;
        });
    b.shortest = shortest->first;

    std::string atomic_dominant;
    Rate atomic = detail::atomic_loss_rate(b.channels, &atomic_dominant);
    Rate photon = 1.0 / b.channels[cc::photon_transit];
    if (atomic.si() > 0 && atomic < photon)
    {
        b.loss_rate = atomic;
        b.dominant = atomic_dominant;
    }
    else
    {
        b.loss_rate = photon;
        b.dominant = cc::photon_transit;
    }
    if (b.loss_rate < channel.natural_rate())
    {
        b.loss_rate = channel.natural_rate();
        b.dominant = cc::natural;
        b.natural_floor_applied = true;
    }
    return b;
}

//---------------------------------------------------------------------------//
/*!
 * Heavy-atom stand-in for a condensate.
 *
 * Atoms of mass m* = ratio * m at a temperature whose thermal velocity
 * equals the condensate spread hbar/(m l). Their de Broglie length is
 * l / ratio; once that drops below the interparticle spacing n^{-1/3} the
 * gas is no longer condensed, yet its Doppler width is unchanged.
 */
struct ThermalEnsemble
{
    Mass mass;
    Speed velocity_spread;
    Length de_broglie_length;
    bool condensed{true};
};

inline ThermalEnsemble equivalent_thermal_ensemble(SampleGeometry const& geom,
                                                   EmissionChannel const& channel,
                                                   double mass_ratio)
{
    if (!(mass_ratio >= 1))
        throw DomainError("equivalent_thermal_ensemble: mass_ratio must be >= 1");
    ThermalEnsemble t;
    t.mass = channel.parent_mass() * mass_ratio;
    t.velocity_spread
        = condensate_velocity_spread(channel.parent_mass(), geom.length());
    t.de_broglie_length = geom.length() / mass_ratio;
    Length spacing{std::cbrt(1.0 / geom.density().si())};
    t.condensed = t.de_broglie_length > spacing;
    return t;
}

//---------------------------------------------------------------------------//
}  // namespace superrad
