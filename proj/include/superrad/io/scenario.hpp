//---------------------------------------------------------------------------//
//! \file superrad/io/scenario.hpp
//! Scenario documents: parsing, serialization and the built-in set.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../gain.hpp"
#include "../physkit.hpp"
#include "yaml_util.hpp"

namespace superrad::io
{
inline constexpr int scenario_schema_version = 1;

struct Scenario
{
    std::string name;
    EmissionChannel channel;
    SampleGeometry geometry;
    Overrides overrides;
    std::string notes;
    std::string provenance;
    //! Rate was given as a half-life (true) or as a rate or lifetime
    bool rate_from_half_life{true};

    GainReport evaluate() const
    {
        return evaluate_scenario(channel, geometry, overrides);
    }

    friend bool operator==(Scenario const&, Scenario const&) = default;
};

namespace detail
{
inline std::string optional_text(YAML::Node const& map, char const* key)
{
    auto n = map[key];
    return n ? scalar(n, key) : std::string{};
}

inline EmissionChannel parse_channel(YAML::Node const& ch, bool* from_half_life)
{
    std::string const where = "channel";
    require_keys(ch,
                 where,
                 {"particle", "energy", "wavelength", "half_life",
                  "natural_rate", "lifetime", "parent_mass",
                  "daughter_lifetime", "daughter_z", "label"});

    auto pnode = required(ch, "particle", where);
    auto kind = particle_kind_from(scalar(pnode, "channel.particle"));
    if (!kind)
        fail_at(pnode,
                "channel.particle: expected photon, neutrino or "
                "annihilation_pair");

    auto energy = optional_quantity<Energy>(ch, "energy", where);
    auto wavelength = optional_quantity<Length>(ch, "wavelength", where);
    if (energy.has_value() == wavelength.has_value())
        fail_at(ch, "channel: give exactly one of 'energy' or 'wavelength'");
    if (wavelength)
    {
        if (!(wavelength->si() > 0))
            throw ValidationError("channel.wavelength", "must be positive");
        energy = photon_energy(*wavelength);
    }

    auto half_life = optional_quantity<Time>(ch, "half_life", where);
    auto rate = optional_quantity<Rate>(ch, "natural_rate", where);
    auto lifetime = optional_quantity<Time>(ch, "lifetime", where);
    int given = half_life.has_value() + rate.has_value() + lifetime.has_value();
    if (given != 1)
        fail_at(ch,
                "channel: give exactly one of 'half_life', 'natural_rate' or "
                "'lifetime'");
    if (lifetime)
    {
        if (!(lifetime->si() > 0))
            throw ValidationError("channel.lifetime", "must be positive");
        rate = 1.0 / *lifetime;
    }

    auto mass = quantity<Mass>(required(ch, "parent_mass", where),
                               "channel.parent_mass");

    std::optional<Time> daughter
        = optional_quantity<Time>(ch, "daughter_lifetime", where);
    if (auto z = ch["daughter_z"])
    {
        if (daughter)
            fail_at(z,
                    "channel: give at most one of 'daughter_lifetime' or "
                    "'daughter_z'");
        int zz = integer(z, "channel.daughter_z");
        if (zz < 1)
            throw ValidationError("channel.daughter_z", "must be >= 1");
        daughter = hydrogenic_cascade_lifetime(zz);
    }
    std::string label = optional_text(ch, "label");

    *from_half_life = half_life.has_value();
    try
    {
        if (half_life)
            return EmissionChannel::from_half_life(
                *kind, *energy, *half_life, mass, daughter, label);
        return EmissionChannel::from_rate(
            *kind, *energy, *rate, mass, daughter, label);
    }
    catch (ValidationError const& e)
    {
        throw ValidationError("channel." + e.field(), e.reason());
    }
}

inline SampleGeometry parse_geometry(YAML::Node const& g)
{
    std::string const where = "geometry";
    require_keys(g, where, {"atom_number", "diameter", "length", "density"});
    auto d = quantity<Length>(required(g, "diameter", where), "geometry.diameter");
    auto l = quantity<Length>(required(g, "length", where), "geometry.length");
    std::optional<double> n_atoms;
    if (auto n = g["atom_number"])
        n_atoms = number(n, "geometry.atom_number");
    auto density = optional_quantity<NumberDensity>(g, "density", where);
    try
    {
        if (n_atoms && density)
            return SampleGeometry::from_all(d, l, *n_atoms, *density);
        if (n_atoms)
            return SampleGeometry::from_atom_number(d, l, *n_atoms);
        if (density)
            return SampleGeometry::from_density(d, l, *density);
    }
    catch (ValidationError const& e)
    {
        throw ValidationError("geometry." + e.field(), e.reason());
    }
    fail_at(g, "geometry: give 'atom_number', 'density' or both");
}

inline Overrides parse_coherence(YAML::Node const& c)
{
    std::string const where = "coherence";
    require_keys(c, where, {"mode", "tau", "velocity_spread", "solid_angle"});
    Overrides o;
    if (auto m = c["mode"])
    {
        o.coherence = coherence_mode_from(scalar(m, "coherence.mode"));
        if (!o.coherence)
            fail_at(m,
                    "coherence.mode: expected auto, recoil, doppler, cascade, "
                    "photon or explicit");
    }
    o.tau = optional_quantity<Time>(c, "tau", where);
    o.velocity_spread = optional_quantity<Speed>(c, "velocity_spread", where);
    if (auto s = c["solid_angle"])
        o.solid_angle = number(s, "coherence.solid_angle");
    if (o.tau && !(o.tau->si() > 0))
        throw ValidationError("coherence.tau", "must be positive");
    if (o.velocity_spread && !(o.velocity_spread->si() >= 0))
        throw ValidationError("coherence.velocity_spread",
                              "must be non-negative");
    if (o.solid_angle && !(*o.solid_angle > 0 && *o.solid_angle <= 1))
        throw ValidationError("coherence.solid_angle", "must be in (0, 1]");
    if (o.effective_mode() == CoherenceMode::explicit_tau && !o.tau)
        throw ValidationError("coherence.tau",
                              "required when mode is 'explicit'");
    return o;
}

inline std::string format_count(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace detail

/*!
 * Parse and validate one scenario document.
 *
 * Every dimensioned value needs a unit suffix. Syntax problems, unknown
 * keys and unit errors raise ParseError with a 1-based position;
 * physically invalid values raise ValidationError naming the field.
 */
inline Scenario parse_scenario(std::string const& text)
{
    using namespace detail;
    auto doc = load_document(text);
    if (!doc || doc.IsNull())
        throw ParseError("empty scenario document");
    require_keys(doc,
                 "scenario",
                 {"schema_version", "name", "provenance", "notes", "channel",
                  "geometry", "coherence"});

    auto ver = required(doc, "schema_version", "scenario");
    if (integer(ver, "schema_version") != scenario_schema_version)
        fail_at(ver,
                "unsupported schema_version (expected "
                    + std::to_string(scenario_schema_version) + ")");

    auto name_node = required(doc, "name", "scenario");
    std::string name = scalar(name_node, "name");
    if (name.empty())
        throw ValidationError("name", "must not be empty");

    bool from_half_life = true;
    auto channel = parse_channel(required(doc, "channel", "scenario"),
                                 &from_half_life);
    auto geometry = parse_geometry(required(doc, "geometry", "scenario"));
    Overrides o;
    if (auto c = doc["coherence"])
        o = parse_coherence(c);

    return Scenario{std::move(name),
                    std::move(channel),
                    geometry,
                    o,
                    optional_text(doc, "notes"),
                    optional_text(doc, "provenance"),
                    from_half_life};
}

/*!
 * Write a scenario in SI units at full precision.
 *
 * All four geometry values are written, so parsing the output reproduces
 * the scenario exactly.
 */
inline std::string serialize_scenario(Scenario const& s)
{
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "schema_version" << YAML::Value
        << scenario_schema_version;
    out << YAML::Key << "name" << YAML::Value << s.name;
    if (!s.provenance.empty())
        out << YAML::Key << "provenance" << YAML::Value << s.provenance;
    if (!s.notes.empty())
        out << YAML::Key << "notes" << YAML::Value << s.notes;

    auto const& ch = s.channel;
    out << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "particle" << YAML::Value << to_string(ch.kind());
    out << YAML::Key << "energy" << YAML::Value << format_quantity(ch.energy());
    if (s.rate_from_half_life)
        out << YAML::Key << "half_life" << YAML::Value
            << format_quantity(ch.half_life());
    else
        out << YAML::Key << "natural_rate" << YAML::Value
            << format_quantity(ch.natural_rate());
    out << YAML::Key << "parent_mass" << YAML::Value
        << format_quantity(ch.parent_mass());
    if (auto d = ch.daughter_lifetime())
        out << YAML::Key << "daughter_lifetime" << YAML::Value
            << format_quantity(*d);
    if (!ch.label().empty())
        out << YAML::Key << "label" << YAML::Value << ch.label();
    out << YAML::EndMap;

    auto const& g = s.geometry;
    out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "atom_number" << YAML::Value
        << detail::format_count(g.atom_number());
    out << YAML::Key << "diameter" << YAML::Value
        << format_quantity(g.diameter());
    out << YAML::Key << "length" << YAML::Value << format_quantity(g.length());
    out << YAML::Key << "density" << YAML::Value
        << format_quantity(g.density());
    out << YAML::EndMap;

    auto const& o = s.overrides;
    if (o.coherence || o.tau || o.velocity_spread || o.solid_angle)
    {
        out << YAML::Key << "coherence" << YAML::Value << YAML::BeginMap;
        if (o.coherence)
            out << YAML::Key << "mode" << YAML::Value
                << to_string(*o.coherence);
        if (o.tau)
            out << YAML::Key << "tau" << YAML::Value
                << format_quantity(*o.tau);
        if (o.velocity_spread)
            out << YAML::Key << "velocity_spread" << YAML::Value
                << format_quantity(*o.velocity_spread);
        if (o.solid_angle)
            out << YAML::Key << "solid_angle" << YAML::Value
                << detail::format_count(*o.solid_angle);
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

//---------------------------------------------------------------------------//
// BUILT-IN SCENARIOS
//---------------------------------------------------------------------------//
namespace builtin_text
{
inline constexpr char const* cs135m = R"(# Gamma emission from a condensate of 135mCs (isomer, M4 transition).
# The transition energy is not tabulated; the photon is placed at the
# middle of the 1-2 pm wavelength band (0.62-1.24 MeV).
schema_version: 1
name: cs135m-gamma
provenance: "135mCs condensate gamma-ray proposal: N = 1e6, d = 3 um, l = 1 mm; 50 ps daughter lifetime is an estimate"
notes: "wavelength band 1-2 pm; default coherence is limited by the daughter cascade"
channel:
  particle: photon
  wavelength: 1.5 pm
  half_life: 53 min
  parent_mass: 135 u
  daughter_lifetime: 50 ps
  label: M4
geometry:
  atom_number: 1e6
  diameter: 3 um
  length: 1 mm
)";

inline constexpr char const* rb83 = R"(# Neutrino emission by electron capture in 83Rb.
# The 83Kr daughter has a K-shell hole; its lifetime follows the
# hydrogenic 1.6 ns scaled by Z^-4 with Z = 36.
schema_version: 1
name: rb83-neutrino
provenance: "neutrino laser proposal: 86 d half-life, N = 1e6; coherence set by the 3 ps transit of the emitted particle"
notes: "optical amplification regime; wavelength taken in the same 1-2 pm band"
channel:
  particle: neutrino
  wavelength: 1.5 pm
  half_life: 86 d
  parent_mass: 83 u
  daughter_z: 36
  label: EC
geometry:
  atom_number: 1e6
  diameter: 3 um
  length: 1 mm
coherence:
  mode: photon
)";

inline constexpr char const* positronium = R"(# Para-positronium annihilating into two 511 keV photons.
# Elongated condensate of 1 cm length; the diameter is illustrative.
schema_version: 1
name: positronium-annihilation
provenance: "singlet lifetime 125 ps; densities around 1e19-1e20 cm^-3; velocity spread 3 mm/s gives ~1 GHz Doppler width"
notes: "sweep density over 1e18-1e21 cm^-3 to see OD cross 1"
channel:
  particle: annihilation_pair
  energy: 0.51099895 MeV
  lifetime: 125 ps
  parent_mass: 1.8218767403e-30 kg
  label: "2 gamma"
geometry:
  diameter: 10 um
  length: 1 cm
  density: 1e20 cm^-3
coherence:
  velocity_spread: 3 mm/s
)";

inline constexpr char const* sodium = R"(# Optical control: the sodium D line from the same condensate shape.
# eV-range emission, where the gain crosses threshold easily.
schema_version: 1
name: sodium-optical
provenance: "superradiant Rayleigh scattering in sodium condensates; 3p lifetime 16.2 ns"
notes: "control case for the E^-3 scaling"
channel:
  particle: photon
  wavelength: 589 nm
  lifetime: 16.2 ns
  parent_mass: 22.98977 u
  label: D2
geometry:
  atom_number: 1e6
  diameter: 3 um
  length: 1 mm
)";
}  // namespace builtin_text

struct BuiltinDocument
{
    char const* name;
    char const* text;
};

inline std::vector<BuiltinDocument> const& builtin_documents()
{
    static std::vector<BuiltinDocument> const docs{
        {"cs135m-gamma", builtin_text::cs135m},
        {"rb83-neutrino", builtin_text::rb83},
        {"positronium-annihilation", builtin_text::positronium},
        {"sodium-optical", builtin_text::sodium},
    };
    return docs;
}

inline std::vector<Scenario> builtin_scenarios()
{
    std::vector<Scenario> out;
    for (auto const& d : builtin_documents())
        out.push_back(parse_scenario(d.text));
    return out;
}

inline std::optional<Scenario> find_builtin(std::string const& name)
{
    for (auto const& d : builtin_documents())
        if (name == d.name)
            return parse_scenario(d.text);
    return std::nullopt;
}

inline std::string read_file(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

//---------------------------------------------------------------------------//
}  // namespace superrad::io
