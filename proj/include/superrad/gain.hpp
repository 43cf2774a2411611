//---------------------------------------------------------------------------//
//! \file superrad/gain.hpp
//! Gain, loss and threshold model for collectively enhanced decay.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "physkit.hpp"
#include "units.hpp"

namespace superrad
{
//---------------------------------------------------------------------------//
// ELEMENTARY RELATIONS
//---------------------------------------------------------------------------//
//! Spontaneous emission rate into the best mode, G = N Gamma Omega
inline Rate gain_rate(double atom_number, Rate natural_rate, double solid_angle)
{
    if (atom_number < 0 || natural_rate.si() < 0 || solid_angle < 0)
        throw DomainError("gain_rate: arguments must be non-negative");
    return atom_number * solid_angle * natural_rate;
}

struct GainVerdict
{
    //! Steady-state occupation G/(L-G); empty at or above threshold
    std::optional<double> g;
    bool above_threshold{false};
    //! G - L above threshold, zero otherwise
    Rate growth_rate;
    //! (1+g) G below threshold; unbounded (infinity) above
    Rate enhanced_rate;
};

/*!
 * Steady state of dM/dt = G (M+1) - L M for an undepleted source.
 *
 * Below threshold M settles at g = G/(L-G) and emission into the mode is
 * enhanced to (1+g) G. At or above threshold there is no steady state and
 * only the exponential growth rate G - L is reported.
 */
inline GainVerdict dimensionless_gain(Rate gain, Rate loss)
{
    if (!(loss.si() > 0))
        throw DomainError("dimensionless_gain: loss rate must be positive");
    if (gain.si() < 0 || !isfinite(gain) || !isfinite(loss))
        throw DomainError("dimensionless_gain: invalid gain rate");
    GainVerdict v;
    if (gain < loss)
    {
        double g = gain.si() / (loss.si() - gain.si());
        v.g = g;
        v.enhanced_rate = (1 + g) * gain;
    }
    else
    {
        v.above_threshold = true;
        v.growth_rate = gain - loss;
        v.enhanced_rate = Rate{std::numeric_limits<double>::infinity()};
    }
    return v;
}

struct ThresholdCheck
{
    bool satisfied{false};
    double margin{0};
};

//! N Gamma (lambda/d)^2 tau > 1, strict
inline ThresholdCheck threshold_check(double atom_number,
                                      Rate natural_rate,
                                      Length wavelength,
                                      Length diameter,
                                      Time coherence_time)
{
    double margin = gain_rate(atom_number,
                              natural_rate,
                              coherent_solid_angle(wavelength, diameter))
                    * coherence_time;
    return {margin > 1, margin};
}

struct ModeDepletionCheck
{
    bool satisfied{false};
    //! N (lambda/d)^2, equal to the optical density n lambda^2 l
    double od_equivalent{0};
};

//! At least one photon per mode before the source is spent: N (lambda/d)^2 > 1
inline ModeDepletionCheck
mode_depletion_check(double atom_number, Length wavelength, Length diameter)
{
    double od = atom_number * coherent_solid_angle(wavelength, diameter);
    return {od > 1, od};
}

//---------------------------------------------------------------------------//
// SCENARIO EVALUATION
//---------------------------------------------------------------------------//
//! Which coherence-loss model sets L
enum class CoherenceMode
{
    automatic,  //!< Combination rule of coherence_budget
    recoil,  //!< Motional dephasing only (recoil transit / Doppler)
    doppler,  //!< Doppler time only
    cascade,  //!< Daughter cascade lifetime only
    photon,  //!< Emitted-particle transit l/c only
    explicit_tau,  //!< Caller-supplied coherence time
};

inline char const* to_string(CoherenceMode m)
{
    switch (m)
    {
        case CoherenceMode::automatic: return "auto";
        case CoherenceMode::recoil: return "recoil";
        case CoherenceMode::doppler: return "doppler";
        case CoherenceMode::cascade: return "cascade";
        case CoherenceMode::photon: return "photon";
        case CoherenceMode::explicit_tau: return "explicit";
    }
    return "?";
}

inline std::optional<CoherenceMode> coherence_mode_from(std::string_view s)
{
    for (auto m : {CoherenceMode::automatic,
                   CoherenceMode::recoil,
                   CoherenceMode::doppler,
                   CoherenceMode::cascade,
                   CoherenceMode::photon,
                   CoherenceMode::explicit_tau})
    {
        if (s == to_string(m))
            return m;
    }
    return std::nullopt;
}

/*!
 * Adjustments applied on top of a channel and geometry.
 *
 * Every field is independent of the others, so the result does not depend
 * on the order in which a caller fills them in.
 */
struct Overrides
{
    std::optional<CoherenceMode> coherence;
    //! Required by CoherenceMode::explicit_tau; implies it when set alone
    std::optional<Time> tau;
    //! Replaces the condensate spread hbar/(m l) in the Doppler channel
    std::optional<Speed> velocity_spread;
    //! Replaces (lambda/d)^2, e.g. with a rounded tabulated value
    std::optional<double> solid_angle;

    CoherenceMode effective_mode() const
    {
        if (coherence)
            return *coherence;
        return tau ? CoherenceMode::explicit_tau : CoherenceMode::automatic;
    }

    friend bool operator==(Overrides const&, Overrides const&) = default;
};

//! Snapshot of what a report was computed from
struct ScenarioInputs
{
    EmissionChannel channel;
    SampleGeometry geometry;
    Overrides overrides;
};

struct GainReport
{
    ScenarioInputs inputs_echo;
    Rate gain_rate_G;
    Rate loss_rate_L;
    Time coherence_time;
    std::optional<double> dimensionless_gain_g;
    bool above_threshold{false};
    Rate growth_rate;
    Rate enhanced_rate;
    Length wavelength;
    double solid_angle{0};
    double optical_density{0};
    double mode_count{0};
    ThresholdCheck threshold;
    ModeDepletionCheck mode_depletion;
    std::string dominant_loss_channel;
    CoherenceBudget budget;
    bool relativistic_recoil{false};
};

namespace detail
{
inline Time require_channel(CoherenceBudget const& b, char const* name)
{
    auto it = b.channels.find(name);
    if (it == b.channels.end())
        throw PreconditionError(std::string("coherence channel '") + name
                                + "' is not present for this scenario");
    return it->second;
}

//! Loss rate and its source for a given mode, floored at Gamma
inline std::pair<Rate, std::string> select_loss(CoherenceBudget const& b,
                                                Overrides const& o,
                                                Rate natural_rate)
{
    namespace cc = coherence_channel;
    Rate loss;
    std::string name;
    switch (o.effective_mode())
    {
        case CoherenceMode::automatic:
            return {b.loss_rate, b.dominant};
        case CoherenceMode::recoil: {
            auto d = b.channels.find(cc::doppler);
            auto a = b.channels.find(cc::atom_transit);
            if (a == b.channels.end() && d == b.channels.end())
                throw PreconditionError(
                    "recoil coherence requested but the emitter has no "
                    "motional dephasing channel");
            bool use_transit
                = a != b.channels.end()
                  && (d == b.channels.end() || !detail::is_shorter(d->second, a->second));
            auto it = use_transit ? a : d;
            loss = 1.0 / it->second;
            name = it->first;
            break;
        }
        case CoherenceMode::doppler:
            loss = 1.0 / require_channel(b, cc::doppler);
            name = cc::doppler;
            break;
        case CoherenceMode::cascade:
            loss = 1.0 / require_channel(b, cc::cascade);
            name = cc::cascade;
            break;
        case CoherenceMode::photon:
            loss = 1.0 / require_channel(b, cc::photon_transit);
            name = cc::photon_transit;
            break;
        case CoherenceMode::explicit_tau:
            if (!o.tau || !(o.tau->si() > 0))
                throw DomainError(
                    "explicit coherence requires a positive tau");
            loss = 1.0 / *o.tau;
            name = cc::explicit_tau;
            break;
    }
    if (loss < natural_rate)
        return {natural_rate, cc::natural};
    return {loss, name};
}
}  // namespace detail

/*!
 * Full gain analysis of one emitter/sample pair.
 */
inline GainReport evaluate_scenario(EmissionChannel const& channel,
                                    SampleGeometry const& geom,
                                    Overrides const& overrides = {})
{
    GainReport r{ScenarioInputs{channel, geom, overrides}};
    r.wavelength = photon_wavelength(channel.energy());
    r.solid_angle = overrides.solid_angle.value_or(
        coherent_solid_angle(r.wavelength, geom.diameter()));
    if (!(r.solid_angle > 0))
        throw DomainError("solid angle override must be positive");
    r.optical_density
        = optical_density(geom.density(), r.wavelength, geom.length());
    r.mode_count = mode_count(geom.diameter(), r.wavelength);
    r.relativistic_recoil = recoil_velocity(channel).relativistic;

    r.budget = coherence_budget(channel, geom, overrides.velocity_spread);
    auto [loss, source]
        = detail::select_loss(r.budget, overrides, channel.natural_rate());
    r.loss_rate_L = loss;
    r.dominant_loss_channel = std::move(source);
    r.coherence_time = 1.0 / loss;

    r.gain_rate_G
        = gain_rate(geom.atom_number(), channel.natural_rate(), r.solid_angle);
    auto verdict = dimensionless_gain(r.gain_rate_G, r.loss_rate_L);
    r.dimensionless_gain_g = verdict.g;
    r.above_threshold = verdict.above_threshold;
    r.growth_rate = verdict.growth_rate;
    r.enhanced_rate = verdict.enhanced_rate;

    double margin = r.gain_rate_G * r.coherence_time;
    r.threshold = {margin > 1, margin};
    double od_eq = geom.atom_number() * r.solid_angle;
    r.mode_depletion = {od_eq > 1, od_eq};
    return r;
}

//---------------------------------------------------------------------------//
// SWEEPS
//---------------------------------------------------------------------------//
enum class SweepVariable
{
    energy,
    atom_number,
    diameter,
    length,
    density,
};

inline char const* to_string(SweepVariable v)
{
    switch (v)
    {
        case SweepVariable::energy: return "energy";
        case SweepVariable::atom_number: return "atom_number";
        case SweepVariable::diameter: return "diameter";
        case SweepVariable::length: return "length";
        case SweepVariable::density: return "density";
    }
    return "?";
}

inline std::optional<SweepVariable> sweep_variable_from(std::string_view s)
{
    for (auto v : {SweepVariable::energy,
                   SweepVariable::atom_number,
                   SweepVariable::diameter,
                   SweepVariable::length,
                   SweepVariable::density})
    {
        if (s == to_string(v))
            return v;
    }
    return std::nullopt;
}

inline Dimension dimension_of(SweepVariable v)
{
    switch (v)
    {
        case SweepVariable::energy: return Dimension::energy;
        case SweepVariable::atom_number: return Dimension::count;
        case SweepVariable::diameter:
        case SweepVariable::length: return Dimension::length;
        case SweepVariable::density: return Dimension::number_density;
    }
    return Dimension::count;
}

struct SweepRow
{
    //! Swept value in SI units
    double value{0};
    GainReport report;
};

struct SweepTable
{
    SweepVariable variable{SweepVariable::energy};
    std::vector<SweepRow> rows;
    //! Least-squares slope of log g against log value, when fitted
    std::optional<double> loglog_slope;
};

//! Logarithmic grid from lo to hi (inclusive) with n points per decade
inline std::vector<double>
log_grid(double lo, double hi, int points_per_decade = 20)
{
    if (!(lo > 0) || !(hi > lo) || points_per_decade < 1)
        throw DomainError("log_grid: need 0 < lo < hi and a positive density");
    double decades = std::log10(hi / lo);
    auto n = static_cast<std::size_t>(std::ceil(decades * points_per_decade - 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo * std::pow(10.0, decades * double(i) / double(n - 1));
    out.back() = hi;
    return out;
}

//! Least-squares slope of log y against log x over points with y > 0
inline double loglog_slope(std::vector<double> const& x,
                           std::vector<double> const& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (!(x[i] > 0) || !(y[i] > 0))
            continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        throw DomainError("loglog_slope: fewer than two usable points");
    double denom = double(n) * sxx - sx * sx;
    return (double(n) * sxy - sx * sy) / denom;
}

namespace detail
{
inline GainReport evaluate_point(EmissionChannel const& channel,
                                 SampleGeometry const& geom,
                                 Overrides const& o,
                                 SweepVariable var,
                                 double value)
{
    Length d = geom.diameter(), l = geom.length();
    switch (var)
    {
        case SweepVariable::energy:
            return evaluate_scenario(channel.with_energy(Energy{value}), geom, o);
        case SweepVariable::atom_number:
            return evaluate_scenario(
                channel, SampleGeometry::from_atom_number(d, l, value), o);
        case SweepVariable::diameter:
            return evaluate_scenario(
                channel,
                SampleGeometry::from_atom_number(
                    Length{value}, l, geom.atom_number()),
                o);
        case SweepVariable::length:
            return evaluate_scenario(
                channel,
                SampleGeometry::from_atom_number(
                    d, Length{value}, geom.atom_number()),
                o);
        case SweepVariable::density:
            return evaluate_scenario(
                channel,
                SampleGeometry::from_density(d, l, NumberDensity{value}),
                o);
    }
    throw DomainError("unknown sweep variable");
}
}  // namespace detail

/*!
 * Evaluate a scenario over a grid of one variable.
 *
 * Atom-number, diameter and length sweeps hold the other two shape
 * parameters and re-derive the density; a density sweep holds d and l and
 * re-derives N. With \c workers > 1 the grid is split into contiguous
 * chunks evaluated concurrently; rows are always returned in grid order.
 */
inline SweepTable sweep(EmissionChannel const& channel,
                        SampleGeometry const& geom,
                        Overrides const& overrides,
                        SweepVariable var,
                        std::vector<double> const& grid,
                        unsigned workers = 1)
{
    SweepTable t;
    t.variable = var;
    std::vector<std::optional<GainReport>> reports(grid.size());
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            reports[i] = detail::evaluate_point(
                channel, geom, overrides, var, grid[i]);
    };
    workers = std::max(
        1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.size())));
    if (workers == 1)
    {
        run(0, grid.size());
    }
    else
    {
        std::vector<std::future<void>> jobs;
        std::size_t chunk = (grid.size() + workers - 1) / workers;
        for (std::size_t b = 0; b < grid.size(); b += chunk)
            jobs.push_back(std::async(
                std::launch::async, run, b, std::min(grid.size(), b + chunk)));
        for (auto& j : jobs)
            j.get();
    }
    t.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        t.rows.push_back({grid[i], std::move(*reports[i])});
    return t;
}

/*!
 * Gain against emitted energy with a fitted log-log slope.
 *
 * Only meaningful when the coherence time is the recoil transit (or the
 * equivalent Doppler time), where g goes as E^-3. A fixed coherence time
 * (cascade, transit of the emitted particle, explicit tau) gives E^-2
 * instead, so such scenarios are refused with a RegimeError.
 */
inline SweepTable gain_energy_scaling(EmissionChannel const& channel,
                                      SampleGeometry const& geom,
                                      Overrides const& overrides,
                                      std::vector<double> const& energies,
                                      unsigned workers = 1)
{
    namespace cc = coherence_channel;
    auto mode = overrides.effective_mode();
    if (mode != CoherenceMode::automatic && mode != CoherenceMode::recoil
        && mode != CoherenceMode::doppler)
        throw RegimeError(std::string("energy scaling needs recoil-limited "
                                      "coherence; coherence mode '")
                          + to_string(mode)
                          + "' fixes tau and would give g ~ E^-2");
    auto t = sweep(channel, geom, overrides, SweepVariable::energy, energies,
                   workers);
    std::vector<double> e, g;
    for (auto const& row : t.rows)
    {
        auto const& dom = row.report.dominant_loss_channel;
        if (dom != cc::atom_transit && dom != cc::doppler)
            throw RegimeError(
                "energy scaling needs recoil-limited coherence, but at E = "
                + format_quantity(Energy{row.value})
                + " the coherence is limited by '" + dom
                + "' (g would scale as E^-2); use --coherence recoil");
        if (row.report.dimensionless_gain_g)
        {
            e.push_back(row.value);
            g.push_back(*row.report.dimensionless_gain_g);
        }
    }
    t.loglog_slope = loglog_slope(e, g);
    return t;
}

//---------------------------------------------------------------------------//
// POSITRONIUM
//---------------------------------------------------------------------------//
//! Energy of each annihilation quantum, m_e c^2
inline Energy annihilation_photon_energy()
{
    return Energy{constants::electron_mass * constants::c * constants::c};
}

//! Unitarity-limited one-photon stimulation cross section lambda_c^2 / 2pi
inline Area unitarity_cross_section()
{
    auto lc = photon_wavelength(annihilation_photon_energy());
    return square(lc) / (2 * std::numbers::pi);
}

struct PositroniumGain
{
    InverseLength inverse_gain_length;
    double optical_density{0};
    bool above_threshold{false};
};

//! Linear one-photon stimulated-annihilation gain n sigma and its OD
inline PositroniumGain positronium_gain(NumberDensity density,
                                        Length length,
                                        std::optional<Area> cross_section = {})
{
    if (density.si() < 0 || !(length.si() > 0))
        throw DomainError("positronium_gain: invalid density or length");
    Area sigma = cross_section.value_or(unitarity_cross_section());
    PositroniumGain p;
    p.inverse_gain_length = density * sigma;
    p.optical_density = optical_density(
        density, photon_wavelength(annihilation_photon_energy()), length);
    p.above_threshold = p.optical_density > 1;
    return p;
}

//---------------------------------------------------------------------------//
}  // namespace superrad
