//---------------------------------------------------------------------------//
//! \file superrad/lindblad/random.hpp
//! Seeded random number-conserving systems for theorem and oracle checks.
//---------------------------------------------------------------------------//
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "system.hpp"

namespace superrad::lindblad
{
enum class InitialKind
{
    fock,
    coherent,
    entangled,
};

inline char const* to_string(InitialKind k)
{
    switch (k)
    {
        case InitialKind::fock: return "fock";
        case InitialKind::coherent: return "coherent";
        case InitialKind::entangled: return "entangled";
    }
    return "?";
}

struct RandomSystemOptions
{
    int modes{2};
    int atoms{2};
    InitialKind initial{InitialKind::fock};
    //! Loss rate applied to every mode
    double gamma{1.0};
    //! Scale of on-site energies and hopping strengths, in units of gamma
    double coupling_scale{2.0};
    //! Add a trilinear term, which breaks number conservation
    bool break_conservation{false};
};

/*!
 * Random quadratic number-conserving Hamiltonian on \c modes modes with
 * uniform single-particle loss.
 *
 * H = sum_i w_i a_i^dag a_i + sum_{i<j} (t_ij a_i^dag a_j + h.c.) with
 * w_i and |t_ij| uniform in [-s, s] and [0, s] (s = coupling_scale *
 * gamma) and uniformly random phases. The basis keeps total occupation
 * <= atoms, which is closed under the dynamics.
 */
inline LindbladSystem random_conserving_system(std::mt19937_64& rng,
                                               RandomSystemOptions const& opt)
{
    if (opt.modes < 1 || opt.atoms < 1)
        throw DomainError("random system needs at least one mode and atom");
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
    double s = opt.coupling_scale * (opt.gamma > 0 ? opt.gamma : 1.0);

    LindbladSystem sys;
    int trunc = opt.atoms + 1;
    for (int i = 0; i < opt.modes; ++i)
        sys.modes.push_back({"m" + std::to_string(i), trunc});
    sys.max_total_excitations = opt.atoms;

    for (int i = 0; i < opt.modes; ++i)
        sys.hamiltonian.push_back(
            {CouplingKind::number, s * uni(rng), {sys.modes[i].name}});
    for (int i = 0; i < opt.modes; ++i)
    {
        for (int j = i + 1; j < opt.modes; ++j)
        {
            double mag = s * 0.5 * (1 + uni(rng));
            sys.hamiltonian.push_back({CouplingKind::bilinear,
                                       std::polar(mag, phase(rng)),
                                       {sys.modes[i].name, sys.modes[j].name}});
        }
    }
    if (opt.break_conservation && opt.modes >= 3)
        sys.hamiltonian.push_back({CouplingKind::trilinear,
                                   s,
                                   {sys.modes[0].name, sys.modes[1].name,
                                    sys.modes[2].name}});
    else if (opt.break_conservation)
        throw DomainError("breaking conservation needs at least 3 modes");

    for (auto const& m : sys.modes)
        sys.jumps.push_back({m.name, opt.gamma});

    switch (opt.initial)
    {
        case InitialKind::fock: {
            ProductFock f;
            std::uniform_int_distribution<int> pick(0, opt.modes - 1);
            for (int a = 0; a < opt.atoms; ++a)
                ++f.occupations[sys.modes[pick(rng)].name];
            sys.initial = f;
            break;
        }
        case InitialKind::coherent: {
            CoherentProduct c;
            double mean = std::sqrt(double(opt.atoms) / opt.modes) * 0.5;
            for (auto const& m : sys.modes)
            {
                double r = mean * (1 + 0.5 * uni(rng));
                c.amplitudes[m.name] = std::polar(r, phase(rng));
            }
            sys.initial = c;
            break;
        }
        case InitialKind::entangled:
            sys.initial = RandomFixedNumber{opt.atoms, rng()};
            break;
    }
    return sys;
}

//---------------------------------------------------------------------------//
}  // namespace superrad::lindblad
