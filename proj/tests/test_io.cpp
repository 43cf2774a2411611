#include <filesystem>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superrad/io/report.hpp"
#include "superrad/io/scenario.hpp"
#include "superrad/io/system_spec.hpp"

using namespace superrad;
using namespace superrad::io;
namespace cc = superrad::coherence_channel;

namespace
{
std::string const minimal = R"(schema_version: 1
name: test
channel:
  particle: photon
  energy: 1 MeV
  half_life: 1 h
  parent_mass: 100 u
geometry:
  atom_number: 1e6
  diameter: 3 um
  length: 1 mm
)";

std::string replace(std::string s, std::string const& from, std::string const& to)
{
    auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return s.replace(pos, from.size(), to);
}
}  // namespace

TEST(Scenario, MinimalDocument)
{
    auto s = parse_scenario(minimal);
    EXPECT_EQ(s.name, "test");
    EXPECT_EQ(s.channel.kind(), ParticleKind::photon);
    EXPECT_DOUBLE_EQ(s.channel.energy().si(), 1e6 * oracle::eV);
    EXPECT_DOUBLE_EQ(s.channel.half_life().si(), 3600);
    double n = 1e6 / (9e-12 * 1e-3);
    EXPECT_NEAR(s.geometry.density().si(), n, 1e-12 * n);
}

TEST(Scenario, RoundTripIsIdentity)
{
    for (auto const& s : builtin_scenarios())
    {
        auto text = serialize_scenario(s);
        auto back = parse_scenario(text);
        EXPECT_EQ(back, s) << s.name << "\n" << text;
        EXPECT_EQ(serialize_scenario(back), text);
    }
    auto m = parse_scenario(minimal);
    EXPECT_EQ(parse_scenario(serialize_scenario(m)), m);
}

TEST(Scenario, ValidationNamesField)
{
    try
    {
        parse_scenario(replace(minimal, "1 MeV", "-1 MeV"));
        FAIL();
    }
    catch (ValidationError const& e)
    {
        EXPECT_NE(e.field().find("energy"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("energy"), std::string::npos);
    }
    EXPECT_THROW(parse_scenario(replace(minimal, "3 um", "0 um")), ValidationError);
    EXPECT_THROW(parse_scenario(replace(minimal, "length: 1 mm",
                                        "length: 1 mm\n  density: 1 cm^-3")),
                 ValidationError);
}

TEST(Scenario, ParseErrorsCarryPosition)
{
    try
    {
        parse_scenario(replace(minimal, "  parent_mass: 100 u", "  parent_mass: 100 u\n  colour: red"));
        FAIL();
    }
    catch (ParseError const& e)
    {
        EXPECT_EQ(e.line(), 8);
        EXPECT_EQ(e.column(), 3);
        EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
    }
    try
    {
        parse_scenario(replace(minimal, "1 MeV", "1 MeVV"));
        FAIL();
    }
    catch (ParseError const& e)
    {
        EXPECT_EQ(e.line(), 5);
        EXPECT_NE(std::string(e.what()).find("unknown unit suffix"), std::string::npos);
    }
    EXPECT_THROW(parse_scenario(replace(minimal, "1 MeV", "1000000")), ParseError);
    EXPECT_THROW(parse_scenario("name: [unclosed"), ParseError);
    EXPECT_THROW(parse_scenario(replace(minimal, "schema_version: 1", "schema_version: 2")),
                 ParseError);
    EXPECT_THROW(parse_scenario(replace(minimal, "  half_life: 1 h\n", "")), ParseError);
    EXPECT_THROW(parse_scenario(replace(minimal, "  half_life: 1 h\n",
                                        "  half_life: 1 h\n  lifetime: 1 h\n")),
                 ParseError);
    EXPECT_THROW(parse_scenario(""), ParseError);
}

TEST(Scenario, AlternativeKeys)
{
    auto s = parse_scenario(replace(replace(minimal, "energy: 1 MeV", "wavelength: 1.5 pm"),
                                    "half_life: 1 h", "lifetime: 125 ps"));
    EXPECT_NEAR(s.channel.energy().si(), oracle::energy_from_wavelength(1.5e-12), 1e-25);
    EXPECT_NEAR(s.channel.natural_rate().si(), 1 / 125e-12, 1);
    auto z = parse_scenario(replace(minimal, "parent_mass: 100 u", "parent_mass: 100 u\n  daughter_z: 36"));
    EXPECT_NEAR(z.channel.daughter_lifetime()->si(), 1.6e-9 / std::pow(36.0, 4), 1e-30);
    auto d = parse_scenario(replace(minimal, "atom_number: 1e6", "density: 1e14 cm^-3"));
    EXPECT_NEAR(d.geometry.atom_number(), 1e20 * 9e-12 * 1e-3, 1e-3);
}

TEST(Builtins, ShippedValues)
{
    auto all = builtin_scenarios();
    ASSERT_EQ(all.size(), 4u);
    auto cs = *find_builtin("cs135m-gamma");
    EXPECT_NEAR(cs.channel.half_life().si(), 53 * 60, 1e-9);
    EXPECT_EQ(cs.geometry.atom_number(), 1e6);
    EXPECT_NEAR(cs.geometry.density().si() / 1e20, 1.1, 0.02);
    auto r = cs.evaluate();
    EXPECT_NEAR(r.budget.channels.at(cc::photon_transit).si(), 3.3e-12, 0.05e-12);
    EXPECT_GE(r.wavelength.si(), 1e-12);
    EXPECT_LE(r.wavelength.si(), 2e-12);

    auto ps = *find_builtin("positronium-annihilation");
    EXPECT_NEAR(1 / ps.channel.natural_rate().si(), 125e-12, 1e-21);
    EXPECT_LT(oracle::c * 125e-12, 0.04);
    EXPECT_NEAR(ps.channel.energy().si(), oracle::m_e * oracle::c * oracle::c, 1e-22);

    auto rb = *find_builtin("rb83-neutrino");
    EXPECT_NEAR(rb.channel.half_life().si(), 86 * 86400, 1e-6);
    EXPECT_NEAR(rb.channel.daughter_lifetime()->si(), 0.95e-15, 0.01e-15);
    EXPECT_EQ(rb.evaluate().dominant_loss_channel, cc::photon_transit);

    auto na = *find_builtin("sodium-optical");
    EXPECT_TRUE(na.evaluate().above_threshold);
    for (auto const& s : all)
        EXPECT_FALSE(s.provenance.empty()) << s.name;
    EXPECT_FALSE(find_builtin("nosuch"));
}

TEST(Builtins, ShippedFilesMatch)
{
    namespace fs = std::filesystem;
    fs::path dir = fs::path(SUPERRAD_SOURCE_DIR) / "scenarios";
    for (auto const& doc : builtin_documents())
    {
        auto path = dir / (std::string(doc.name) + ".yaml");
        ASSERT_TRUE(fs::exists(path)) << path;
        EXPECT_EQ(read_file(path.string()), std::string(doc.text)) << path;
    }
}

TEST(Report, HumanFormat)
{
    auto cs = *find_builtin("cs135m-gamma");
    auto text = emit_report(cs.evaluate(), Format::human, cs.name);
    EXPECT_EQ(text.rfind("schema_version 1\n", 0), 0u);
    EXPECT_NE(text.find("CODATA 2018"), std::string::npos);
    EXPECT_NE(text.find("\nabove_threshold: false\n"), std::string::npos);
    EXPECT_NE(text.find("\ndominant_loss_channel: daughter_cascade\n"), std::string::npos);
    EXPECT_NE(text.find("\ngain_rate_G: "), std::string::npos);
    EXPECT_NE(text.find(" 1/s\n"), std::string::npos);
}

TEST(Report, CsvRoundTrip)
{
    auto cs = *find_builtin("cs135m-gamma");
    auto r = cs.evaluate();
    auto rows = parse_csv(emit_report(r, Format::csv, cs.name));
    ASSERT_EQ(rows.size(), 2u);
    ASSERT_EQ(rows[0].size(), rows[1].size());
    auto col = [&](std::string const& name) {
        for (std::size_t i = 0; i < rows[0].size(); ++i)
            if (rows[0][i] == name)
                return rows[1][i];
        ADD_FAILURE() << name;
        return std::string{};
    };
    EXPECT_EQ(std::stod(col("gain_rate_G_per_s")), r.gain_rate_G.si());
    EXPECT_EQ(std::stod(col("loss_rate_L_per_s")), r.loss_rate_L.si());
    EXPECT_EQ(std::stod(col("g")), *r.dimensionless_gain_g);
    EXPECT_EQ(std::stod(col("solid_angle")), r.solid_angle);
    EXPECT_EQ(col("above_threshold"), "false");
    EXPECT_EQ(col("scenario"), "cs135m-gamma");
}

TEST(Report, CsvQuoting)
{
    std::ostringstream os;
    csv_row(os, {"plain", "with,comma", "with \"quote\"", "two\nlines"});
    EXPECT_EQ(os.str(), "plain,\"with,comma\",\"with \"\"quote\"\"\",\"two\nlines\"\n");
    auto rows = parse_csv(os.str() + "# comment\n1,2,3,4\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][1], "with,comma");
    EXPECT_EQ(rows[0][2], "with \"quote\"");
    EXPECT_EQ(rows[0][3], "two\nlines");
    EXPECT_EQ(rows[1][3], "4");
}

TEST(Report, SweepAndTrajectoryCsv)
{
    auto cs = *find_builtin("cs135m-gamma");
    Overrides o;
    o.coherence = CoherenceMode::recoil;
    auto t = gain_energy_scaling(cs.channel, cs.geometry, o, log_grid(1e-16, 1e-12, 5));
    auto text = emit_report(t, Format::csv);
    EXPECT_NE(text.find("\n# slope="), std::string::npos);
    auto rows = parse_csv(text);
    EXPECT_EQ(rows.size(), t.rows.size() + 1);
    EXPECT_EQ(rows[0][0], "sweep_energy_J");
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        EXPECT_EQ(std::stod(rows[i + 1][0]), t.rows[i].value);

    lindblad::ObservableTrajectory traj;
    traj.times = {0, 0.5};
    traj.names = {"N_total"};
    traj.values = {{2.0, 1.0 / 3}};
    auto tr = parse_csv(emit_report(traj, Format::csv));
    EXPECT_EQ(tr[0][1], "N_total");
    EXPECT_EQ(std::stod(tr[2][1]), 1.0 / 3);
}

TEST(SystemSpec, DickeShorthand)
{
    auto spec = parse_system_spec(R"(schema_version: 1
name: rabi
horizon: 4.8 s
samples: 97
observables: [n_a, n_c, N_total]
dicke:
  atoms: 1
  coupling: 1.3 1/s
  form: trilinear
  photon_loss: 0 1/s
)");
    EXPECT_EQ(spec.samples, 97u);
    EXPECT_EQ(spec.observables.size(), 3u);
    EXPECT_EQ(spec.system.modes.size(), 3u);
    EXPECT_THROW(parse_system_spec("schema_version: 1\nhorizon: 1\ndicke: {atoms: 1, coupling: 1 1/s}\n"),
                 ParseError);
    EXPECT_THROW(parse_system_spec("schema_version: 1\nhorizon: 1 s\nobservables: [n_z]\n"
                                   "dicke: {atoms: 1, coupling: 1 1/s}\n"),
                 ParseError);
}

TEST(SystemSpec, ExplicitForm)
{
    auto spec = parse_system_spec(R"(schema_version: 1
horizon: 2 s
modes:
  - {name: a, truncation: 3}
  - {name: b, truncation: 3}
max_total_excitations: 2
hamiltonian:
  - {kind: number, strength: 0.5 1/s, modes: [a]}
  - {kind: bilinear, strength: 1 1/s, phase: 0.3, modes: [a, b]}
jumps:
  - {mode: a, rate: 1 1/s}
  - {mode: b, rate: 1 1/s}
initial:
  fock: {a: 2}
)");
    EXPECT_EQ(spec.system.hamiltonian.size(), 2u);
    EXPECT_NEAR(std::arg(spec.system.hamiltonian[1].strength), 0.3, 1e-15);
    auto check = lindblad::verify_exponential_decay(spec.system, spec.horizon);
    EXPECT_LT(check.max_deviation, 1e-6);
}
