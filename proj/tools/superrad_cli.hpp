//---------------------------------------------------------------------------//
//! \file tools/superrad_cli.hpp
//! Command-line front end. run_cli() is kept stream-based so tests can
//! drive it without spawning processes.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "superrad/gain.hpp"
#include "superrad/io/report.hpp"
#include "superrad/io/scenario.hpp"
#include "superrad/io/system_spec.hpp"
#include "superrad/lindblad/random.hpp"

namespace superrad::cli
{
namespace exit_code
{
inline constexpr int ok = 0;
//! verify-decay ran but a deviation exceeded the tolerance
inline constexpr int check_failed = 1;
inline constexpr int input_error = 2;
inline constexpr int refused = 3;
}  // namespace exit_code

inline constexpr char const* scenario_dir_env = "SUPERRAD_SCENARIO_DIR";

namespace detail
{
namespace fs = std::filesystem;

inline std::string builtin_names()
{
    std::string s;
    for (auto const& d : io::builtin_documents())
        s += (s.empty() ? "" : ", ") + std::string(d.name);
    return s;
}

inline std::optional<fs::path> scenario_dir()
{
    if (char const* dir = std::getenv(scenario_dir_env); dir && *dir)
        return fs::path(dir);
    return std::nullopt;
}

/*!
 * Built-in name, then a file path, then <name>.yaml in the scenario
 * directory named by the environment.
 */
inline io::Scenario resolve_scenario(std::string const& source)
{
    if (auto s = io::find_builtin(source))
        return *s;
    if (fs::is_regular_file(source))
        return io::parse_scenario(io::read_file(source));
    if (auto dir = scenario_dir())
    {
        for (char const* ext : {".yaml", ".yml"})
        {
            auto p = *dir / (source + ext);
            if (fs::is_regular_file(p))
                return io::parse_scenario(io::read_file(p.string()));
        }
    }
    throw DomainError("unknown scenario '" + source + "'; built-ins: "
                      + builtin_names());
}

inline double parse_dimensioned(std::string const& text, Dimension dim)
{
    switch (dim)
    {
        case Dimension::count: return parse_quantity<double>(text);
        case Dimension::length: return parse_quantity<Length>(text).si();
        case Dimension::number_density:
            return parse_quantity<NumberDensity>(text).si();
        case Dimension::energy: return parse_quantity<Energy>(text).si();
        default: break;
    }
    throw DomainError("unsupported sweep dimension");
}

inline io::Format format_from(std::string const& s)
{
    return s == "csv" ? io::Format::csv : io::Format::human;
}

inline void csv_trailer(std::ostream& out)
{
    out << "# schema_version=" << io::report_schema_version << '\n';
}

struct OverrideFlags
{
    std::string coherence;
    std::string tau;
    std::string velocity_spread;
    std::optional<double> solid_angle;

    void add_to(CLI::App* app)
    {
        app->add_option("--coherence", coherence,
                        "Coherence mode: auto, recoil, doppler, cascade, photon, explicit");
        app->add_option("--tau", tau, "Explicit coherence time, e.g. '50 ps'");
        app->add_option("--velocity-spread", velocity_spread,
                        "Velocity spread for the Doppler channel, e.g. '3 mm/s'");
        app->add_option("--solid-angle", solid_angle, "Replace (lambda/d)^2");
    }

    //! Flags take precedence over the scenario's own coherence section
    Overrides apply(Overrides o) const
    {
        if (!coherence.empty())
        {
            o.coherence = coherence_mode_from(coherence);
            if (!o.coherence)
                throw DomainError("unknown coherence mode '" + coherence + "'");
        }
        if (!tau.empty())
            o.tau = parse_quantity<Time>(tau);
        if (!velocity_spread.empty())
            o.velocity_spread = parse_quantity<Speed>(velocity_spread);
        if (solid_angle)
            o.solid_angle = *solid_angle;
        return o;
    }
};

struct OdeFlags
{
    double rtol{1e-10};
    double atol{1e-13};

    void add_to(CLI::App* app)
    {
        app->add_option("--rtol", rtol, "Integrator relative tolerance")
            ->capture_default_str();
        app->add_option("--atol", atol, "Integrator absolute tolerance")
            ->capture_default_str();
    }

    OdeOptions options() const
    {
        OdeOptions o;
        o.rtol = rtol;
        o.atol = atol;
        return o;
    }
};

//---------------------------------------------------------------------------//
struct VerifyFlags
{
    int draws{50};
    std::vector<int> modes{2, 4};
    std::vector<int> atoms{2, 4};
    double gamma{1.0};
    double lifetimes{5.0};
    std::uint64_t seed{20250101};
    double tolerance{1e-6};
    bool break_conservation{false};
};

inline int run_verify(VerifyFlags const& f,
                      OdeFlags const& ode,
                      std::ostream& out)
{
    using namespace lindblad;
    if (f.draws < 1)
        throw DomainError("--draws must be at least 1");
    auto range = [](std::vector<int> const& v, char const* flag) {
        int lo = v.front(), hi = v.back();
        if (lo < 1 || hi < lo)
            throw DomainError(std::string(flag) + " must give 1 <= min <= max");
        return std::pair{lo, hi};
    };
    auto [mlo, mhi] = range(f.modes, "--modes");
    auto [alo, ahi] = range(f.atoms, "--atoms");
    if (f.break_conservation)
        mlo = std::max(mlo, 3), mhi = std::max(mhi, 3);
    if (!(f.gamma >= 0))
        throw DomainError("--gamma must be non-negative");
    double horizon = f.lifetimes / (f.gamma > 0 ? f.gamma : 1.0);

    std::mt19937_64 rng(f.seed);
    EvolveOptions opts;
    opts.ode = ode.options();
    opts.samples = 51;

    io::detail::human_header(out, "verify-decay");
    out << "seed: " << f.seed << '\n';
    out << "draws: " << f.draws << '\n';
    out << "gamma: " << io::format_number(f.gamma) << '\n';
    out << "horizon: " << io::format_number(horizon) << " s\n";
    double worst = 0;
    InitialKind kinds[] = {InitialKind::fock, InitialKind::coherent,
                           InitialKind::entangled};
    for (int i = 0; i < f.draws; ++i)
    {
        RandomSystemOptions ro;
        ro.modes = std::uniform_int_distribution<int>(mlo, mhi)(rng);
        ro.atoms = std::uniform_int_distribution<int>(alo, ahi)(rng);
        ro.initial = kinds[i % 3];
        ro.gamma = f.gamma;
        ro.break_conservation = f.break_conservation;
        auto sys = random_conserving_system(rng, ro);
        auto check = verify_exponential_decay(sys, horizon, opts);
        worst = std::max(worst, check.max_deviation);
        out << "draw " << i << ": modes=" << ro.modes << " atoms=" << ro.atoms
            << " initial=" << to_string(ro.initial)
            << " N0=" << io::format_number(check.initial_number)
            << " deviation=" << io::format_number(check.max_deviation) << '\n';
    }
    bool pass = worst < f.tolerance;
    out << "max_deviation: " << io::format_number(worst) << '\n';
    out << "tolerance: " << io::format_number(f.tolerance) << '\n';
    out << "result: " << (pass ? "pass" : "fail") << '\n';
    return pass ? exit_code::ok : exit_code::check_failed;
}
}  // namespace detail

/*!
 * Run one invocation. \c args excludes the program name.
 *
 * Exit codes: 0 success, 1 verification failed, 2 input or validation
 * error, 3 refused (regime or size limits).
 */
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    using namespace detail;
    CLI::App app{"Collective-emission gain and master-equation toolkit",
                 "superrad"};
    app.require_subcommand(1, 1);

    // list-scenarios
    auto* list = app.add_subcommand("list-scenarios", "List available scenarios");

    // evaluate
    std::string scenario;
    std::string format = "human";
    OverrideFlags overrides;
    auto* evaluate = app.add_subcommand("evaluate", "Gain report for one scenario");
    evaluate->add_option("scenario", scenario, "Built-in name or scenario file")
        ->required();
    evaluate->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"human", "csv"}))
        ->capture_default_str();
    overrides.add_to(evaluate);

    // sweep
    std::string variable = "energy";
    std::string lo, hi;
    int ppd = 20;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string sweep_format = "csv";
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one scenario variable");
    sweep_cmd->add_option("scenario", scenario, "Built-in name or scenario file")
        ->required();
    sweep_cmd->add_option("--variable", variable, "energy, atom_number, diameter, length or density")
        ->check(CLI::IsMember({"energy", "atom_number", "diameter", "length", "density"}))
        ->capture_default_str();
    sweep_cmd->add_option("--lo", lo, "Grid start with unit, e.g. '1 keV'")->required();
    sweep_cmd->add_option("--hi", hi, "Grid end with unit, e.g. '10 MeV'")->required();
    sweep_cmd->add_option("--points-per-decade", ppd, "Logarithmic grid density")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep_cmd->add_option("--workers", workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--format", sweep_format, "Output format")
        ->check(CLI::IsMember({"human", "csv"}))
        ->capture_default_str();
    OverrideFlags sweep_overrides;
    sweep_overrides.add_to(sweep_cmd);

    // simulate
    std::string spec_path;
    std::string sim_format = "csv";
    std::optional<int> samples;
    bool check_trunc = false;
    OdeFlags sim_ode;
    auto* simulate = app.add_subcommand("simulate", "Master-equation run of a system file");
    simulate->add_option("system", spec_path, "System document")->required();
    simulate->add_option("--samples", samples, "Override the sample count");
    simulate->add_flag("--check-truncation", check_trunc,
                       "Rerun with truncation + 2 and flag changes above 1e-7");
    simulate->add_option("--format", sim_format, "Output format")
        ->check(CLI::IsMember({"human", "csv"}))
        ->capture_default_str();
    sim_ode.add_to(simulate);

    // verify-decay
    VerifyFlags vf;
    // the decay check tolerates 1e-6, so a looser default keeps 50 draws quick
    OdeFlags verify_ode{1e-9, 1e-12};
    auto* verify = app.add_subcommand(
        "verify-decay", "Check single-body decay on random conserving systems");
    verify->add_option("--draws", vf.draws, "Number of random systems")
        ->capture_default_str();
    verify->add_option("--modes", vf.modes, "Mode count: N or MIN MAX")
        ->expected(1, 2);
    verify->add_option("--atoms", vf.atoms, "Atom count: N or MIN MAX")
        ->expected(1, 2);
    verify->add_option("--gamma", vf.gamma, "Uniform loss rate in 1/s")
        ->capture_default_str();
    verify->add_option("--lifetimes", vf.lifetimes, "Horizon in units of 1/gamma")
        ->capture_default_str();
    verify->add_option("--seed", vf.seed, "RNG seed")->capture_default_str();
    verify->add_option("--tolerance", vf.tolerance, "Pass threshold")
        ->capture_default_str();
    verify->add_flag("--break-conservation", vf.break_conservation,
                     "Add a non-conserving term (the precondition check must refuse)");
    verify_ode.add_to(verify);

    std::reverse(args.begin(), args.end());
    try
    {
        app.parse(args);
    }
    catch (CLI::ParseError const& e)
    {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::input_error;
    }

    try
    {
        if (*list)
        {
            for (auto const& s : io::builtin_scenarios())
                out << s.name << "\tbuiltin\t" << s.provenance << '\n';
            if (auto dir = scenario_dir(); dir && fs::is_directory(*dir))
            {
                std::vector<fs::path> files;
                for (auto const& e : fs::directory_iterator(*dir))
                    if (e.path().extension() == ".yaml")
                        files.push_back(e.path());
                std::sort(files.begin(), files.end());
                for (auto const& p : files)
                {
                    try
                    {
                        auto s = io::parse_scenario(io::read_file(p.string()));
                        out << s.name << '\t' << p.string() << '\t'
                            << s.provenance << '\n';
                    }
                    catch (Error const& e)
                    {
                        err << p.string() << ": " << e.what() << '\n';
                    }
                }
            }
            return exit_code::ok;
        }
        if (*evaluate)
        {
            auto s = resolve_scenario(scenario);
            auto report = evaluate_scenario(
                s.channel, s.geometry, overrides.apply(s.overrides));
            auto fmt = format_from(format);
            out << io::emit_report(report, fmt, s.name);
            if (fmt == io::Format::csv)
                csv_trailer(out);
            return exit_code::ok;
        }
        if (*sweep_cmd)
        {
            auto s = resolve_scenario(scenario);
            auto var = *sweep_variable_from(variable);
            double a = parse_dimensioned(lo, dimension_of(var));
            double b = parse_dimensioned(hi, dimension_of(var));
            auto grid = log_grid(a, b, ppd);
            auto o = sweep_overrides.apply(s.overrides);
            SweepTable table
                = var == SweepVariable::energy
                      ? gain_energy_scaling(s.channel, s.geometry, o, grid, workers)
                      : sweep(s.channel, s.geometry, o, var, grid, workers);
            auto fmt = format_from(sweep_format);
            out << io::emit_report(table, fmt);
            if (fmt == io::Format::csv)
                csv_trailer(out);
            return exit_code::ok;
        }
        if (*simulate)
        {
            auto spec = io::parse_system_spec(io::read_file(spec_path));
            lindblad::EvolveOptions opts;
            opts.samples = samples ? static_cast<std::size_t>(*samples) : spec.samples;
            opts.ode = sim_ode.options();
            opts.dimension_cap = spec.dimension_cap;
            if (opts.samples < 2)
                throw DomainError("--samples must be at least 2");
            auto traj = lindblad::evolve(spec.system, spec.horizon, spec.observables, opts);
            if (check_trunc)
            {
                auto c = lindblad::check_truncation(
                    spec.system, spec.horizon, spec.observables, opts);
                err << "truncation: max relative change "
                    << io::format_number(c.max_relative_change)
                    << (c.adequate ? " (adequate)" : " (FLAGGED: raise truncation)")
                    << '\n';
            }
            auto fmt = format_from(sim_format);
            out << io::emit_report(traj, fmt);
            if (fmt == io::Format::csv)
                csv_trailer(out);
            return exit_code::ok;
        }
        if (*verify)
        {
            if (vf.modes.size() == 1)
                vf.modes.push_back(vf.modes.front());
            if (vf.atoms.size() == 1)
                vf.atoms.push_back(vf.atoms.front());
            return run_verify(vf, verify_ode, out);
        }
    }
    catch (SizingError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code::refused;
    }
    catch (RegimeError const& e)
    {
        err << "refused: " << e.what() << '\n';
        return exit_code::refused;
    }
    catch (IntegrationError const& e)
    {
        err << "integration failed: " << e.what() << '\n';
        return exit_code::refused;
    }
    catch (Error const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code::input_error;
    }
    catch (YAML::Exception const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code::input_error;
    }
    return exit_code::input_error;
}

//---------------------------------------------------------------------------//
}  // namespace superrad::cli
