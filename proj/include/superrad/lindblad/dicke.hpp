//---------------------------------------------------------------------------//
//! \file superrad/lindblad/dicke.hpp
//! Collective-emission Hamiltonians and their bad-cavity rate limit.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <string>

#include "../units.hpp"
#include "system.hpp"

namespace superrad::lindblad
{
enum class DickeForm
{
    //! chi (a c^dag + h.c.): parents a emit photons c, no daughter mode
    bilinear,
    //! chi (a b^dag c^dag + h.c.): parent a -> daughter b + photon c
    trilinear,
};

inline char const* to_string(DickeForm f)
{
    return f == DickeForm::bilinear ? "bilinear" : "trilinear";
}

namespace dicke_mode
{
inline constexpr char const* parent = "a";
inline constexpr char const* daughter = "b";
inline constexpr char const* photon = "c";
}  // namespace dicke_mode

/*!
 * N parents in one mode coupled to a photon mode (and a daughter mode).
 *
 * All N atoms start in the parent mode with the other modes empty. Every
 * mode is truncated at N+1 levels, which is exact: the couplings conserve
 * the atom count and create at most one photon per converted atom. The
 * photon mode loses quanta at \c photon_loss; a nonzero
 * \c atom_decoherence is modeled as loss on the daughter mode.
 *
 * Restricted to the symmetric sector this is the spin-N/2 model
 * chi (S^- c^dag + h.c.) with S^- = b^dag a (or the bare lowering of a).
 */
inline LindbladSystem dicke_system(int n_atoms,
                                   double coupling,
                                   DickeForm form,
                                   double photon_loss,
                                   double atom_decoherence = 0)
{
    if (n_atoms < 1)
        throw DomainError("dicke_system: need at least one atom");
    if (coupling < 0 || photon_loss < 0 || atom_decoherence < 0)
        throw DomainError("dicke_system: rates must be non-negative");
    namespace dm = dicke_mode;
    int trunc = n_atoms + 1;
    LindbladSystem sys;
    if (form == DickeForm::trilinear)
    {
        sys.modes = {{dm::parent, trunc}, {dm::daughter, trunc}, {dm::photon, trunc}};
        sys.hamiltonian.push_back(
            {CouplingKind::trilinear, coupling, {dm::parent, dm::daughter, dm::photon}});
        if (atom_decoherence > 0)
            sys.jumps.push_back({dm::daughter, atom_decoherence});
    }
    else
    {
        if (atom_decoherence > 0)
            throw DomainError(
                "dicke_system: the bilinear form has no daughter mode to "
                "decohere");
        sys.modes = {{dm::parent, trunc}, {dm::photon, trunc}};
        // c^dag a + h.c. = chi (a c^dag + h.c.)
        sys.hamiltonian.push_back(
            {CouplingKind::bilinear, coupling, {dm::photon, dm::parent}});
    }
    if (photon_loss > 0)
        sys.jumps.push_back({dm::photon, photon_loss});
    sys.initial = ProductFock{{{dm::parent, n_atoms}}};
    return sys;
}

//---------------------------------------------------------------------------//
struct AdiabaticRates
{
    //! Single-atom emission rate with the photon eliminated, 4 chi^2 / kappa
    Rate gamma_eff;
    //! N gamma_eff: the G of dM/dt = G (M+1) - L M with M daughters
    Rate gain;
    //! Decay of the daughter coherence
    Rate loss;
};

/*!
 * Bad-cavity elimination of the photon mode.
 *
 * For kappa >> chi sqrt(N) the photon amplitude follows the atoms
 * adiabatically and each parent converts at gamma_eff (n_b + 1), giving
 * the rate equation with G = N gamma_eff and L equal to the daughter loss.
 * The validity regime is taken as kappa >= 10 chi sqrt(N); outside it the
 * model refuses with RegimeError.
 */
inline AdiabaticRates adiabatic_rate_model(double coupling,
                                           double photon_loss,
                                           int n_atoms,
                                           double daughter_loss = 0)
{
    if (n_atoms < 1 || coupling < 0 || daughter_loss < 0)
        throw DomainError("adiabatic_rate_model: invalid arguments");
    if (!(photon_loss >= 10 * coupling * std::sqrt(double(n_atoms)))
        || !(photon_loss > 0))
        throw RegimeError("adiabatic elimination needs kappa >= 10 chi sqrt(N); got "
                          "kappa = "
                          + std::to_string(photon_loss) + ", chi = "
                          + std::to_string(coupling) + ", N = "
                          + std::to_string(n_atoms));
    AdiabaticRates r;
    r.gamma_eff = Rate{4 * coupling * coupling / photon_loss};
    r.gain = double(n_atoms) * r.gamma_eff;
    r.loss = Rate{daughter_loss};
    return r;
}

//---------------------------------------------------------------------------//
}  // namespace superrad::lindblad
