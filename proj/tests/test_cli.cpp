#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superrad/io/report.hpp"
#include "superrad_cli.hpp"

using superrad::io::parse_csv;

namespace
{
struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = superrad::cli::run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string system_file(std::string const& name)
{
    return std::string(SUPERRAD_SOURCE_DIR) + "/scenarios/systems/" + name + ".yaml";
}

std::string line_value(std::string const& text, std::string const& key)
{
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind(key + ": ", 0) == 0)
            return line.substr(key.size() + 2);
    ADD_FAILURE() << "no line " << key;
    return {};
}

std::size_t column(std::vector<std::vector<std::string>> const& rows, std::string const& name)
{
    for (std::size_t i = 0; i < rows.at(0).size(); ++i)
        if (rows[0][i] == name)
            return i;
    ADD_FAILURE() << "no column " << name;
    return 0;
}
}  // namespace

TEST(Cli, EvaluateBuiltin)
{
    auto r = run({"evaluate", "cs135m-gamma"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("above_threshold: false"), std::string::npos);
    EXPECT_NE(r.out.find("dominant_loss_channel: daughter_cascade"), std::string::npos);

    auto csv = run({"evaluate", "cs135m-gamma", "--format", "csv"});
    ASSERT_EQ(csv.code, 0);
    auto rows = parse_csv(csv.out);
    ASSERT_EQ(rows.size(), 2u);
    double g = std::stod(rows[1][column(rows, "g")]);
    EXPECT_GT(g, 1e-22);
    EXPECT_LT(g, 1e-19);
    EXPECT_NE(csv.out.find("\n# schema_version=1\n"), std::string::npos);

    auto recoil = run({"evaluate", "cs135m-gamma", "--coherence", "recoil", "--format", "csv"});
    ASSERT_EQ(recoil.code, 0);
    auto rr = parse_csv(recoil.out);
    double gr = std::stod(rr[1][column(rr, "g")]);
    EXPECT_GT(gr, 1e-18);
    EXPECT_LT(gr, 1e-16);
    EXPECT_EQ(rr[1][column(rr, "dominant_loss_channel")], "atom_transit");
}

TEST(Cli, EvaluateExplicitTau)
{
    auto r = run({"evaluate", "cs135m-gamma", "--coherence", "explicit", "--tau", "50 ps",
                  "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(r.out);
    EXPECT_DOUBLE_EQ(std::stod(rows[1][column(rows, "loss_rate_L_per_s")]), 1 / 50e-12);
    EXPECT_EQ(run({"evaluate", "cs135m-gamma", "--coherence", "explicit"}).code, 2);
    EXPECT_EQ(run({"evaluate", "cs135m-gamma", "--tau", "50"}).code, 2);
}

TEST(Cli, InputErrors)
{
    auto r = run({"evaluate", "nosuch"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cs135m-gamma"), std::string::npos);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"evaluate", "cs135m-gamma", "--coherence", "psychic"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);

    auto dir = std::filesystem::temp_directory_path() / "superrad_cli_bad";
    std::filesystem::create_directories(dir);
    auto path = (dir / "bad.yaml").string();
    std::ofstream(path) << "schema_version: 1\nname: bad\nchannel:\n  particle: photon\n"
                           "  energy: -1 MeV\n  half_life: 1 h\n  parent_mass: 1 u\n"
                           "geometry: {atom_number: 1, diameter: 1 um, length: 1 um}\n";
    auto bad = run({"evaluate", path});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("energy"), std::string::npos);
}

TEST(Cli, ScenarioDirectory)
{
    auto dir = std::filesystem::temp_directory_path() / "superrad_cli_dir";
    std::filesystem::create_directories(dir);
    auto text = superrad::io::read_file(std::string(SUPERRAD_SOURCE_DIR)
                                        + "/scenarios/sodium-optical.yaml");
    auto pos = text.find("name: sodium-optical");
    text.replace(pos, 20, "name: sodium-copy");
    std::ofstream((dir / "sodium-copy.yaml").string()) << text;
    setenv(superrad::cli::scenario_dir_env, dir.c_str(), 1);
    auto r = run({"evaluate", "sodium-copy"});
    auto list = run({"list-scenarios"});
    unsetenv(superrad::cli::scenario_dir_env);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("above_threshold: true"), std::string::npos);
    EXPECT_NE(list.out.find("sodium-copy\t"), std::string::npos);
    EXPECT_NE(list.out.find("positronium-annihilation\tbuiltin"), std::string::npos);
}

TEST(Cli, EnergySweepSlope)
{
    auto r = run({"sweep", "cs135m-gamma", "--variable", "energy", "--lo", "1 keV", "--hi",
                  "10 MeV", "--coherence", "recoil"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto pos = r.out.find("# slope=");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(r.out.substr(pos + 8)), -3, 1e-6);
    auto rows = parse_csv(r.out);
    EXPECT_EQ(rows.size(), 82u);
    std::vector<double> e, g;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        e.push_back(std::stod(rows[i][0]));
        g.push_back(std::stod(rows[i][column(rows, "g")]));
    }
    EXPECT_NEAR(oracle::ls_slope(e, g), -3, 1e-6);
}

TEST(Cli, CascadeEnergySweepRefused)
{
    auto r = run({"sweep", "cs135m-gamma", "--variable", "energy", "--lo", "1 keV", "--hi",
                  "10 MeV"});
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, AtomNumberSweep)
{
    auto r = run({"sweep", "cs135m-gamma", "--variable", "atom_number", "--lo", "1e3", "--hi",
                  "1e7", "--workers", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(r.out);
    std::vector<double> n, g;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        n.push_back(std::stod(rows[i][0]));
        g.push_back(std::stod(rows[i][column(rows, "g")]));
    }
    EXPECT_NEAR(oracle::ls_slope(n, g), 1, 1e-9);
    auto serial = run({"sweep", "cs135m-gamma", "--variable", "atom_number", "--lo", "1e3",
                       "--hi", "1e7", "--workers", "1"});
    EXPECT_EQ(serial.out, r.out);
}

TEST(Cli, PositroniumDensitySweep)
{
    auto r = run({"sweep", "positronium-annihilation", "--variable", "density", "--lo",
                  "1e15 cm^-3", "--hi", "1e22 cm^-3", "--points-per-decade", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(r.out);
    auto od = column(rows, "od_equivalent");
    double first = std::stod(rows[1][od]), last = std::stod(rows.back()[od]);
    EXPECT_LT(first, 1);
    EXPECT_GT(last, 1);
}

TEST(Cli, SimulateRabi)
{
    auto r = run({"simulate", system_file("rabi-n1")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 202u);
    auto na = column(rows, "n_a");
    double worst = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        double t = std::stod(rows[i][0]);
        worst = std::max(worst, std::abs(std::stod(rows[i][na]) - oracle::rabi_parent(1, t)));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Cli, SimulateZeroCoupling)
{
    auto r = run({"simulate", system_file("zero-coupling"), "--check-truncation"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(r.out);
    for (std::size_t c = 1; c < rows[0].size(); ++c)
        for (std::size_t i = 2; i < rows.size(); ++i)
            EXPECT_EQ(rows[i][c], rows[1][c]) << rows[0][c];
    EXPECT_NE(r.err.find("adequate"), std::string::npos);
}

TEST(Cli, SimulateBeamSplitterHuman)
{
    auto r = run({"simulate", system_file("beam-splitter"), "--format", "human",
                  "--samples", "11"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("schema_version 1\n", 0), 0u);
}

TEST(Cli, SimulateRefusesOversized)
{
    auto r = run({"simulate", system_file("oversized")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("160000"), std::string::npos);
    EXPECT_EQ(run({"simulate", "/nonexistent.yaml"}).code, 2);
}

TEST(Cli, VerifyDecay)
{
    auto r = run({"verify-decay", "--draws", "12"});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("result: pass"), std::string::npos);
    EXPECT_LT(std::stod(line_value(r.out, "max_deviation")), 1e-6);

    auto again = run({"verify-decay", "--draws", "12"});
    EXPECT_EQ(again.out, r.out);
    auto other = run({"verify-decay", "--draws", "12", "--seed", "7"});
    EXPECT_NE(other.out, r.out);

    auto frozen = run({"verify-decay", "--draws", "6", "--gamma", "0"});
    ASSERT_EQ(frozen.code, 0);
    EXPECT_LT(std::stod(line_value(frozen.out, "max_deviation")), 1e-9);

    auto broken = run({"verify-decay", "--draws", "3", "--break-conservation"});
    EXPECT_EQ(broken.code, 2);
    EXPECT_NE(broken.err.find("conserv"), std::string::npos);

    auto strict = run({"verify-decay", "--draws", "3", "--tolerance", "0"});
    EXPECT_EQ(strict.code, 1);
    EXPECT_NE(strict.out.find("result: fail"), std::string::npos);
}
