#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superrad/lindblad/dicke.hpp"
#include "superrad/lindblad/evolve.hpp"
#include "superrad/lindblad/random.hpp"
#include "superrad/lindblad/reference.hpp"

using namespace superrad;
using namespace superrad::lindblad;

namespace
{
LindbladSystem damped_mode(Complex alpha, double gamma, int trunc = 30)
{
    LindbladSystem s;
    s.modes = {{"a", trunc}};
    s.jumps = {{"a", gamma}};
    s.initial = CoherentProduct{{{"a", alpha}}};
    return s;
}

double max_rel(std::vector<double> const& got, std::vector<double> const& want)
{
    double w = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
        w = std::max(w, std::abs(got[i] - want[i]) / std::abs(want[i]));
    return w;
}
}  // namespace

TEST(Basis, SizesAndOperators)
{
    FockBasis b({{"a", 3}, {"b", 4}});
    EXPECT_EQ(b.size(), 12u);
    FockBasis r({{"a", 5}, {"b", 5}, {"c", 5}}, 4);
    EXPECT_EQ(r.size(), 35u);  // C(4 + 3, 3)
    auto a = Matrix(b.annihilation(b.mode_index("b")));
    auto from = *b.index_of({1, 3});
    auto to = *b.index_of({1, 2});
    EXPECT_NEAR(std::abs(a(to, from)), std::sqrt(3.0), 1e-15);
    EXPECT_FALSE(r.index_of({3, 2, 0}));
}

TEST(Basis, CapReportsProduct)
{
    try
    {
        FockBasis b({{"a", 20}, {"b", 20}, {"c", 20}});
        FAIL();
    }
    catch (SizingError const& e)
    {
        EXPECT_NE(std::string(e.what()).find("8000"), std::string::npos);
    }
}

TEST(Assemble, HermitianAndNumberConserving)
{
    std::mt19937_64 rng(1);
    auto sys = random_conserving_system(rng, {3, 3, InitialKind::fock, 1.0});
    auto as = assemble(sys);
    EXPECT_LT(lindblad::detail::hermiticity_error(as.hamiltonian), 1e-12);
    EXPECT_LT(number_conservation_error(as), 1e-12);
    auto broken = random_conserving_system(rng, {3, 2, InitialKind::fock, 1.0, 2.0, true});
    broken.max_total_excitations.reset();
    EXPECT_GT(number_conservation_error(assemble(broken)), 1e-3);
}

TEST(Evolve, DampedCoherentMode)
{
    double gamma = 0.7;
    Complex alpha{1.2, -0.5};
    auto sys = damped_mode(alpha, gamma);
    auto t = evolve(sys, 5 / gamma, {Observable::total(), Observable::coherence("a")});
    std::vector<double> want_n, want_coh;
    for (double time : t.times)
    {
        want_n.push_back(oracle::damped_number(std::norm(alpha), gamma, time));
        want_coh.push_back(std::abs(alpha) * std::exp(-gamma * time / 2));
    }
    EXPECT_LT(max_rel(t.column("N_total"), want_n), 1e-6);
    EXPECT_LT(max_rel(t.column("coh_a"), want_coh), 1e-6);
    EXPECT_LT(t.max_trace_deviation, 1e-8);
    EXPECT_GT(t.min_eigenvalue, -1e-8);
}

TEST(Evolve, UnitaryConservesNumber)
{
    std::mt19937_64 rng(2);
    auto sys = random_conserving_system(rng, {3, 3, InitialKind::coherent, 0.0});
    auto t = evolve(sys, 5.0, {Observable::total()});
    for (double n : t.values[0])
        EXPECT_NEAR(n, t.values[0][0], 1e-9);
}

TEST(Evolve, TwoModeTheorem)
{
    std::mt19937_64 rng(3);
    auto sys = random_conserving_system(rng, {2, 2, InitialKind::fock, 1.3});
    auto t = evolve(sys, 5 / 1.3, {Observable::total()});
    std::vector<double> want;
    for (double time : t.times)
        want.push_back(2 * std::exp(-1.3 * time));
    EXPECT_LT(max_rel(t.values[0], want), 1e-6);
}

TEST(Evolve, Deterministic)
{
    std::mt19937_64 rng(4);
    auto sys = random_conserving_system(rng, {3, 2, InitialKind::entangled, 1.0});
    auto a = evolve(sys, 3.0, default_observables(sys));
    auto b = evolve(sys, 3.0, default_observables(sys));
    EXPECT_EQ(a.values, b.values);
}

TEST(VerifyDecay, Preconditions)
{
    std::mt19937_64 rng(5);
    auto sys = random_conserving_system(rng, {3, 2, InitialKind::fock, 1.0});
    auto uneven = sys;
    uneven.jumps[1].rate = 2.0;
    try
    {
        verify_exponential_decay(uneven, 1.0);
        FAIL();
    }
    catch (PreconditionError const& e)
    {
        EXPECT_EQ(std::string(e.what()).rfind("uniform loss", 0), 0u);
    }
    auto missing = sys;
    missing.jumps.pop_back();
    EXPECT_THROW(verify_exponential_decay(missing, 1.0), PreconditionError);

    auto broken = random_conserving_system(rng, {3, 2, InitialKind::fock, 1.0, 2.0, true});
    try
    {
        verify_exponential_decay(broken, 1.0);
        FAIL();
    }
    catch (PreconditionError const& e)
    {
        EXPECT_EQ(std::string(e.what()).rfind("number conservation", 0), 0u);
    }
}

TEST(VerifyDecay, EntangledAndProductDecayIdentically)
{
    std::mt19937_64 rng(6);
    auto fock = random_conserving_system(rng, {3, 3, InitialKind::fock, 1.0});
    auto ent = fock;
    ent.initial = RandomFixedNumber{3, 12345};
    auto a = verify_exponential_decay(fock, 5.0);
    auto b = verify_exponential_decay(ent, 5.0);
    EXPECT_LT(a.max_deviation, 1e-6);
    EXPECT_LT(b.max_deviation, 1e-6);
    EXPECT_LT(max_rel(a.trajectory.values[0], b.trajectory.values[0]), 1e-6);

    auto frozen = fock;
    for (auto& j : frozen.jumps)
        j.rate = 0;
    EXPECT_EQ(verify_exponential_decay(frozen, 5.0).max_deviation <= 1e-9, true);
}

TEST(Reference, IdentityAndClosedForm)
{
    LindbladSystem idle;
    idle.modes = {{"a", 3}, {"b", 3}};
    idle.initial = ProductFock{{{"a", 2}, {"b", 1}}};
    auto t = matrix_exponential_reference(idle, 4.0, 5, default_observables(idle));
    for (auto const& col : t.values)
        for (double v : col)
            EXPECT_EQ(v, col.front());

    auto sys = damped_mode({1.0, 0.0}, 0.5, 25);
    auto r = matrix_exponential_reference(sys, 6.0, 13, {Observable::total()});
    std::vector<double> want;
    for (double time : r.times)
        want.push_back(oracle::damped_number(1.0, 0.5, time));
    EXPECT_LT(max_rel(r.values[0], want), 1e-9);
}

TEST(Reference, AgreesWithEvolve)
{
    std::mt19937_64 rng(7);
    InitialKind kinds[] = {InitialKind::fock, InitialKind::coherent, InitialKind::entangled};
    for (int i = 0; i < 6; ++i)
    {
        RandomSystemOptions o{2 + i % 2, 2, kinds[i % 3], 0.8};
        auto sys = random_conserving_system(rng, o);
        auto obs = default_observables(sys);
        auto a = evolve(sys, 4.0, obs);
        auto b = matrix_exponential_reference(sys, 4.0, 51, obs);
        EXPECT_LT(max_relative_difference(a, b), 1e-7) << "system " << i;
    }
}

TEST(Dicke, RabiOscillation)
{
    double chi = 1.3;
    auto sys = dicke_system(1, chi, DickeForm::trilinear, 0);
    double period = std::numbers::pi / chi;
    EvolveOptions opt;
    opt.samples = 41;
    opt.ode = {1e-11, 1e-13};
    auto t = evolve(sys, 2 * period, {Observable::number("a"), Observable::number("c")}, opt);
    for (std::size_t i = 0; i < t.times.size(); ++i)
    {
        double want = oracle::rabi_parent(chi, t.times[i]);
        EXPECT_NEAR(t.values[0][i], want, 1e-6);
        EXPECT_NEAR(t.values[1][i], 1 - want, 1e-6);
    }
}

TEST(Dicke, ZeroCouplingFrozen)
{
    auto sys = dicke_system(3, 0.0, DickeForm::trilinear, 2.0);
    auto t = evolve(sys, 5.0, default_observables(sys));
    for (auto const& col : t.values)
        for (double v : col)
            EXPECT_EQ(v, col.front());
}

TEST(Dicke, SpinMapping)
{
    for (int n_atoms : {1, 2, 3, 5})
    {
        double chi = 0.4;
        auto sys = dicke_system(n_atoms, chi, DickeForm::trilinear, 0);
        auto as = assemble(sys);
        auto const& b = as.basis;
        for (int k = 0; k < n_atoms; ++k)
        {
            for (int m = 0; m + 1 <= n_atoms; ++m)
            {
                auto from = b.index_of({n_atoms - k, k, m});
                auto to = b.index_of({n_atoms - k - 1, k + 1, m + 1});
                ASSERT_TRUE(from && to);
                double want = chi * oracle::spin_lowering(n_atoms, k) * std::sqrt(m + 1.0);
                EXPECT_NEAR(std::abs(as.hamiltonian(*to, *from)), want, 1e-12);
            }
        }
        auto bil = assemble(dicke_system(n_atoms, chi, DickeForm::bilinear, 0));
        for (int k = 0; k < n_atoms; ++k)
        {
            auto from = bil.basis.index_of({n_atoms - k, k});
            auto to = bil.basis.index_of({n_atoms - k - 1, k + 1});
            double want = chi * std::sqrt(double(n_atoms - k)) * std::sqrt(k + 1.0);
            EXPECT_NEAR(std::abs(bil.hamiltonian(*to, *from)), want, 1e-12);
        }
    }
}

TEST(Dicke, Errors)
{
    EXPECT_THROW(dicke_system(0, 1, DickeForm::trilinear, 1), DomainError);
    EXPECT_THROW(dicke_system(2, 1, DickeForm::bilinear, 1, 0.5), DomainError);
    EXPECT_THROW(evolve(dicke_system(20, 1, DickeForm::trilinear, 1), 1.0, {Observable::total()}),
                 SizingError);
}

TEST(Adiabatic, RateModel)
{
    auto r = adiabatic_rate_model(1.0, 100.0, 1);
    EXPECT_DOUBLE_EQ(r.gamma_eff.si(), 0.04);
    EXPECT_DOUBLE_EQ(adiabatic_rate_model(1.0, 200.0, 1).gamma_eff.si(), 0.02);
    EXPECT_EQ(adiabatic_rate_model(0.0, 100.0, 4).gamma_eff.si(), 0);
    EXPECT_DOUBLE_EQ(adiabatic_rate_model(1.0, 100.0, 4).gain.si(), 0.16);
    EXPECT_THROW(adiabatic_rate_model(1.0, 5.0, 1), RegimeError);
    EXPECT_THROW(adiabatic_rate_model(1.0, 19.0, 4), RegimeError);
}

TEST(Adiabatic, MatchesFullSimulationForOneAtom)
{
    double chi = 1.0, kappa = 100.0;
    auto rates = adiabatic_rate_model(chi, kappa, 1);
    auto sys = dicke_system(1, chi, DickeForm::trilinear, kappa);
    EvolveOptions opt;
    opt.samples = 101;
    double horizon = 5 / rates.gamma_eff.si();
    auto t = evolve(sys, horizon, {Observable::number("a")}, opt);
    // skip the 1/kappa transient, then fit ln n_a
    auto const& n = t.values[0];
    std::size_t i0 = 5, i1 = 40;
    double rate = -(std::log(n[i1]) - std::log(n[i0])) / (t.times[i1] - t.times[i0]);
    EXPECT_NEAR(rate, rates.gamma_eff.si(), 0.05 * rates.gamma_eff.si());
}

TEST(Dicke, SpectatorAndCoupledPreload)
{
    double chi = 1.0, kappa = 100.0;
    auto base = dicke_system(2, chi, DickeForm::trilinear, kappa);
    auto with_spectator = base;
    with_spectator.modes.push_back({"s", 4});
    with_spectator.jumps.push_back({"s", 0.3});
    auto plain = with_spectator;
    with_spectator.initial = ProductFock{{{"a", 2}, {"s", 3}}};
    plain.initial = ProductFock{{{"a", 2}}};
    auto obs = std::vector<Observable>{Observable::number("a")};
    auto x = evolve(with_spectator, 20.0, obs);
    auto y = evolve(plain, 20.0, obs);
    for (std::size_t i = 0; i < x.times.size(); ++i)
        EXPECT_NEAR(x.values[0][i], y.values[0][i], 1e-8);

    // Daughter and photon excitations in the coupled modes speed up emission
    auto seeded = base;
    seeded.initial = ProductFock{{{"a", 2}, {"b", 1}, {"c", 1}}};
    seeded.modes = {{"a", 4}, {"b", 4}, {"c", 4}};
    auto plain3 = base;
    plain3.modes = seeded.modes;
    auto ps = evolve(seeded, 2.0, obs);
    auto pp = evolve(plain3, 2.0, obs);
    EXPECT_LT(ps.values[0][5], pp.values[0][5]);
}

TEST(Truncation, AdequateForExactBasis)
{
    auto sys = dicke_system(2, 1.0, DickeForm::trilinear, 10.0);
    auto c = check_truncation(sys, 2.0, default_observables(sys));
    EXPECT_TRUE(c.adequate);
    EXPECT_LT(c.max_relative_change, 1e-7);
}
