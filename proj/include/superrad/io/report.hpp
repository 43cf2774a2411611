//---------------------------------------------------------------------------//
//! \file superrad/io/report.hpp
//! Human-readable and CSV emission of reports, sweeps and trajectories.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "../constants.hpp"
#include "../gain.hpp"
#include "../lindblad/evolve.hpp"
#include "../rate_equation.hpp"

namespace superrad::io
{
inline constexpr int report_schema_version = 1;

enum class Format
{
    human,
    csv,
};

//---------------------------------------------------------------------------//
// CSV PRIMITIVES
//---------------------------------------------------------------------------//
//! Full-precision scientific notation; exact on re-parse
inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void csv_row(std::ostream& os, std::vector<std::string> const& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i)
            os << ',';
        os << csv_field(fields[i]);
    }
    os << '\n';
}

/*!
 * Split CSV text into records.
 *
 * Quoted fields may contain commas, doubled quotes and line breaks. Lines
 * starting with '#' outside quotes are comments and are skipped.
 */
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool at_line_start = true;
    std::size_t i = 0;
    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        at_line_start = true;
    };
    while (i < text.size())
    {
        char c = text[i];
        if (at_line_start && !quoted && c == '#')
        {
            while (i < text.size() && text[i] != '\n')
                ++i;
            ++i;
            continue;
        }
        at_line_start = false;
        if (quoted)
        {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"')
            {
                field += '"';
                i += 2;
                continue;
            }
            if (c == '"')
                quoted = false;
            else
                field += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
        {
            row.push_back(std::move(field));
            field.clear();
        }
        else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
        {
            end_row();
            ++i;
        }
        else if (c == '\n')
            end_row();
        else
            field += c;
        ++i;
    }
    if (quoted)
        throw ParseError("unterminated quoted CSV field");
    if (!field.empty() || !row.empty())
        end_row();
    return rows;
}

//---------------------------------------------------------------------------//
// GAIN REPORTS
//---------------------------------------------------------------------------//
namespace detail
{
inline void human_header(std::ostream& os, std::string_view kind)
{
    os << "schema_version " << report_schema_version << '\n';
    os << "constants: " << constants::codata_release << '\n';
    os << "report: " << kind << '\n';
}

inline std::vector<std::string> gain_columns()
{
    return {"energy_J",          "natural_rate_per_s", "atom_number",
            "diameter_m",        "length_m",           "density_per_m3",
            "wavelength_m",      "solid_angle",        "optical_density",
            "mode_count",        "gain_rate_G_per_s",  "loss_rate_L_per_s",
            "coherence_time_s",  "dominant_loss_channel", "g",
            "above_threshold",   "growth_rate_per_s",  "enhanced_rate_per_s",
            "threshold_margin",  "od_equivalent"};
}

inline std::vector<std::string> gain_fields(GainReport const& r)
{
    auto const& ch = r.inputs_echo.channel;
    auto const& g = r.inputs_echo.geometry;
    return {format_number(ch.energy().si()),
            format_number(ch.natural_rate().si()),
            format_number(g.atom_number()),
            format_number(g.diameter().si()),
            format_number(g.length().si()),
            format_number(g.density().si()),
            format_number(r.wavelength.si()),
            format_number(r.solid_angle),
            format_number(r.optical_density),
            format_number(r.mode_count),
            format_number(r.gain_rate_G.si()),
            format_number(r.loss_rate_L.si()),
            format_number(r.coherence_time.si()),
            r.dominant_loss_channel,
            r.dimensionless_gain_g ? format_number(*r.dimensionless_gain_g)
                                   : std::string{},
            r.above_threshold ? "true" : "false",
            r.above_threshold ? format_number(r.growth_rate.si()) : std::string{},
            format_number(r.enhanced_rate.si()),
            format_number(r.threshold.margin),
            format_number(r.mode_depletion.od_equivalent)};
}

inline char const* yes_no(bool b)
{
    return b ? "true" : "false";
}
}  // namespace detail

inline void emit_human(std::ostream& os,
                       GainReport const& r,
                       std::string_view scenario_name = {})
{
    detail::human_header(os, "gain");
    auto const& ch = r.inputs_echo.channel;
    auto const& geo = r.inputs_echo.geometry;
    auto const& o = r.inputs_echo.overrides;
    if (!scenario_name.empty())
        os << "scenario: " << scenario_name << '\n';
    os << "input.particle: " << to_string(ch.kind()) << '\n';
    os << "input.energy: " << format_quantity(ch.energy()) << '\n';
    os << "input.half_life: " << format_quantity(ch.half_life()) << '\n';
    os << "input.natural_rate: " << format_quantity(ch.natural_rate()) << '\n';
    os << "input.parent_mass: " << format_quantity(ch.parent_mass()) << '\n';
    if (auto d = ch.daughter_lifetime())
        os << "input.daughter_lifetime: " << format_quantity(*d) << '\n';
    os << "input.atom_number: " << format_number(geo.atom_number()) << '\n';
    os << "input.diameter: " << format_quantity(geo.diameter()) << '\n';
    os << "input.length: " << format_quantity(geo.length()) << '\n';
    os << "input.density: " << format_quantity(geo.density()) << '\n';
    os << "input.coherence_mode: " << to_string(o.effective_mode()) << '\n';
    if (o.tau)
        os << "input.tau: " << format_quantity(*o.tau) << '\n';
    if (o.velocity_spread)
        os << "input.velocity_spread: " << format_quantity(*o.velocity_spread)
           << '\n';
    if (o.solid_angle)
        os << "input.solid_angle: " << format_number(*o.solid_angle) << '\n';

    os << "wavelength: " << format_quantity(r.wavelength) << '\n';
    os << "solid_angle: " << format_number(r.solid_angle) << '\n';
    os << "mode_count: " << format_number(r.mode_count) << '\n';
    os << "optical_density: " << format_number(r.optical_density) << '\n';
    for (auto const& [name, t] : r.budget.channels)
        os << "coherence." << name << ": " << format_quantity(t) << '\n';
    os << "coherence.shortest: " << r.budget.shortest << '\n';
    os << "relativistic_recoil: " << detail::yes_no(r.relativistic_recoil) << '\n';
    os << "gain_rate_G: " << format_quantity(r.gain_rate_G) << '\n';
    os << "loss_rate_L: " << format_quantity(r.loss_rate_L) << '\n';
    os << "coherence_time: " << format_quantity(r.coherence_time) << '\n';
    os << "dominant_loss_channel: " << r.dominant_loss_channel << '\n';
    os << "above_threshold: " << detail::yes_no(r.above_threshold) << '\n';
    if (r.dimensionless_gain_g)
        os << "dimensionless_gain_g: " << format_number(*r.dimensionless_gain_g)
           << '\n';
    else
        os << "dimensionless_gain_g: undefined\n";
    if (r.above_threshold)
        os << "growth_rate: " << format_quantity(r.growth_rate) << '\n';
    os << "enhanced_rate: " << format_quantity(r.enhanced_rate) << '\n';
    os << "threshold_margin: " << format_number(r.threshold.margin) << '\n';
    os << "threshold_satisfied: " << detail::yes_no(r.threshold.satisfied) << '\n';
    os << "od_equivalent: " << format_number(r.mode_depletion.od_equivalent)
       << '\n';
    os << "mode_depletion_satisfied: "
       << detail::yes_no(r.mode_depletion.satisfied) << '\n';
}

inline void emit_csv(std::ostream& os,
                     GainReport const& r,
                     std::string_view scenario_name = {})
{
    auto header = detail::gain_columns();
    header.insert(header.begin(), "scenario");
    csv_row(os, header);
    auto fields = detail::gain_fields(r);
    fields.insert(fields.begin(), std::string(scenario_name));
    csv_row(os, fields);
}

inline std::string emit_report(GainReport const& r,
                               Format f,
                               std::string_view scenario_name = {})
{
    std::ostringstream os;
    if (f == Format::human)
        emit_human(os, r, scenario_name);
    else
        emit_csv(os, r, scenario_name);
    return os.str();
}

//---------------------------------------------------------------------------//
// SWEEPS
//---------------------------------------------------------------------------//
//! Prefixed so it never collides with the echoed input columns
inline std::string sweep_value_column(SweepVariable v)
{
    std::string name = std::string("sweep_") + to_string(v);
    switch (v)
    {
        case SweepVariable::energy: return name + "_J";
        case SweepVariable::atom_number: return name;
        case SweepVariable::diameter:
        case SweepVariable::length: return name + "_m";
        case SweepVariable::density: return name + "_per_m3";
    }
    return name;
}

inline void emit_csv(std::ostream& os, SweepTable const& t)
{
    auto header = detail::gain_columns();
    header.insert(header.begin(), sweep_value_column(t.variable));
    csv_row(os, header);
    for (auto const& row : t.rows)
    {
        auto fields = detail::gain_fields(row.report);
        fields.insert(fields.begin(), format_number(row.value));
        csv_row(os, fields);
    }
    if (t.loglog_slope)
        os << "# slope=" << format_number(*t.loglog_slope) << '\n';
}

inline void emit_human(std::ostream& os, SweepTable const& t)
{
    detail::human_header(os, "sweep");
    os << "variable: " << to_string(t.variable) << '\n';
    os << "points: " << t.rows.size() << '\n';
    if (t.loglog_slope)
        os << "loglog_slope: " << format_number(*t.loglog_slope) << '\n';
    for (auto const& row : t.rows)
    {
        os << "row: " << to_string(t.variable) << '='
           << format_number(row.value) << " g=";
        if (row.report.dimensionless_gain_g)
            os << format_number(*row.report.dimensionless_gain_g);
        else
            os << "undefined";
        os << " G=" << format_quantity(row.report.gain_rate_G)
           << " L=" << format_quantity(row.report.loss_rate_L)
           << " OD=" << format_number(row.report.optical_density)
           << " above_threshold=" << detail::yes_no(row.report.above_threshold)
           << " dominant=" << row.report.dominant_loss_channel << '\n';
    }
}

inline std::string emit_report(SweepTable const& t, Format f)
{
    std::ostringstream os;
    if (f == Format::human)
        emit_human(os, t);
    else
        emit_csv(os, t);
    return os.str();
}

//---------------------------------------------------------------------------//
// TRAJECTORIES
//---------------------------------------------------------------------------//
inline void emit_csv(std::ostream& os, lindblad::ObservableTrajectory const& t)
{
    std::vector<std::string> header{"time_s"};
    header.insert(header.end(), t.names.begin(), t.names.end());
    csv_row(os, header);
    for (std::size_t i = 0; i < t.times.size(); ++i)
    {
        std::vector<std::string> row{format_number(t.times[i])};
        for (auto const& col : t.values)
            row.push_back(format_number(col[i]));
        csv_row(os, row);
    }
}

inline void emit_human(std::ostream& os, lindblad::ObservableTrajectory const& t)
{
    detail::human_header(os, "trajectory");
    os << "samples: " << t.times.size() << '\n';
    os << "max_trace_deviation: " << format_number(t.max_trace_deviation) << '\n';
    os << "max_hermiticity_error: " << format_number(t.max_hermiticity_error)
       << '\n';
    os << "min_eigenvalue: " << format_number(t.min_eigenvalue) << '\n';
    for (std::size_t k = 0; k < t.names.size(); ++k)
        os << "final." << t.names[k] << ": " << format_number(t.values[k].back())
           << '\n';
}

inline std::string emit_report(lindblad::ObservableTrajectory const& t, Format f)
{
    std::ostringstream os;
    if (f == Format::human)
        emit_human(os, t);
    else
        emit_csv(os, t);
    return os.str();
}

inline void emit_csv(std::ostream& os, RateTrajectory const& t)
{
    csv_row(os, {"time_s", "occupation_M", "source_N", "emitted_total"});
    for (std::size_t i = 0; i < t.times.size(); ++i)
        csv_row(os,
                {format_number(t.times[i]),
                 format_number(t.occupation_M[i]),
                 format_number(t.source_N[i]),
                 format_number(t.emitted_total[i])});
}

inline std::string emit_report(RateTrajectory const& t, Format f)
{
    std::ostringstream os;
    if (f == Format::human)
    {
        detail::human_header(os, "rate_trajectory");
        os << "samples: " << t.times.size() << '\n';
        os << "final.occupation_M: " << format_number(t.occupation_M.back()) << '\n';
        os << "final.source_N: " << format_number(t.source_N.back()) << '\n';
        os << "final.emitted_total: " << format_number(t.emitted_total.back())
           << '\n';
    }
    else
    {
        emit_csv(os, t);
    }
    return os.str();
}

//---------------------------------------------------------------------------//
}  // namespace superrad::io
