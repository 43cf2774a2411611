//---------------------------------------------------------------------------//
//! \file superrad/lindblad/system.hpp
//! Description of a small open bosonic system and its dense assembly.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "basis.hpp"

namespace superrad::lindblad
{
//---------------------------------------------------------------------------//
// SPECIFICATION
//---------------------------------------------------------------------------//
enum class CouplingKind
{
    bilinear,  //!< s x^dag y + h.c.
    trilinear,  //!< s x y^dag z^dag + h.c.
    number,  //!< s x^dag x, s real
};

inline char const* to_string(CouplingKind k)
{
    switch (k)
    {
        case CouplingKind::bilinear: return "bilinear";
        case CouplingKind::trilinear: return "trilinear";
        case CouplingKind::number: return "number";
    }
    return "?";
}

//! One Hamiltonian term; strength in rad/s (hbar = 1)
struct Coupling
{
    CouplingKind kind{CouplingKind::number};
    Complex strength{0};
    std::vector<std::string> modes;
};

//! Single-particle loss sqrt(rate) a on one mode
struct LossJump
{
    std::string mode;
    double rate{0};
};

struct ProductFock
{
    std::map<std::string, int> occupations;
};

//! Product of coherent states, projected onto the basis and renormalized
struct CoherentProduct
{
    std::map<std::string, Complex> amplitudes;
};

//! Explicit amplitudes in FockBasis order
struct StateVector
{
    std::vector<Complex> amplitudes;
};

//! Haar-like random pure state inside the fixed-total sector
struct RandomFixedNumber
{
    int total{1};
    std::uint64_t seed{0};
};

using InitialState
    = std::variant<ProductFock, CoherentProduct, StateVector, RandomFixedNumber>;

/*!
 * Modes, Hamiltonian terms, loss channels and initial pure state.
 *
 * \c max_total_excitations restricts the basis to states whose total
 * occupation does not exceed it (see FockBasis).
 */
struct LindbladSystem
{
    std::vector<ModeSpec> modes;
    std::optional<int> max_total_excitations;
    std::vector<Coupling> hamiltonian;
    std::vector<LossJump> jumps;
    InitialState initial{ProductFock{}};
};

//---------------------------------------------------------------------------//
// ASSEMBLY
//---------------------------------------------------------------------------//
/*!
 * Dense operators of a LindbladSystem in its Fock basis.
 *
 * The master equation is stored in the form
 *   drho/dt = -i (K rho - rho K^dag) + sum_j L_j rho L_j^dag,
 * with the non-Hermitian effective Hamiltonian
 *   K = H - (i/2) sum_j L_j^dag L_j.
 */
struct AssembledSystem
{
    FockBasis basis;
    Matrix hamiltonian;
    std::vector<SparseMatrix> jumps;
    std::vector<SparseMatrix> jumps_adjoint;
    std::vector<double> jump_rates;
    Matrix effective;
    Matrix rho0;

    std::size_t dimension() const { return basis.size(); }
};

namespace detail
{
inline double hermiticity_error(Matrix const& h)
{
    double scale = h.cwiseAbs().maxCoeff();
    if (scale == 0)
        return 0;
    return (h - h.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline Matrix build_hamiltonian(FockBasis const& basis,
                                std::vector<Coupling> const& terms)
{
    auto n = static_cast<Eigen::Index>(basis.size());
    Matrix h = Matrix::Zero(n, n);
    for (auto const& term : terms)
    {
        std::size_t expected = term.kind == CouplingKind::bilinear    ? 2
                               : term.kind == CouplingKind::trilinear ? 3
                                                                      : 1;
        if (term.modes.size() != expected)
            throw DomainError(std::string(to_string(term.kind))
                              + " coupling needs "
                              + std::to_string(expected) + " mode names");
        std::vector<SparseMatrix> ops;
        for (std::size_t i = 0; i < term.modes.size(); ++i)
        {
            for (std::size_t j = 0; j < i; ++j)
            {
                if (term.modes[i] == term.modes[j])
                    throw DomainError(
                        "coupling repeats mode '" + term.modes[i] + "'");
            }
            ops.push_back(basis.annihilation(basis.mode_index(term.modes[i])));
        }
        SparseMatrix t;
        switch (term.kind)
        {
            case CouplingKind::number:
                if (term.strength.imag() != 0)
                    throw DomainError("number coupling strength must be real");
                t = SparseMatrix(ops[0].adjoint()) * ops[0];
                h += term.strength.real() * Matrix(t);
                continue;
            case CouplingKind::bilinear:
                t = SparseMatrix(ops[0].adjoint()) * ops[1];
                break;
            case CouplingKind::trilinear:
                // annihilate first so a capped total does not drop the term
                t = SparseMatrix(ops[1].adjoint()) * SparseMatrix(ops[2].adjoint())
                    * ops[0];
                break;
        }
        Matrix dense = term.strength * Matrix(t);
        h += dense + dense.adjoint();
    }
    return h;
}

inline Vector initial_vector(FockBasis const& basis, InitialState const& init)
{
    auto n = static_cast<Eigen::Index>(basis.size());
    Vector psi = Vector::Zero(n);
    if (auto const* f = std::get_if<ProductFock>(&init))
    {
        std::vector<int> occ(basis.num_modes(), 0);
        for (auto const& [name, count] : f->occupations)
            occ[basis.mode_index(name)] = count;
        auto idx = basis.index_of(occ);
        if (!idx)
            throw DomainError("initial Fock state lies outside the basis");
        psi[static_cast<Eigen::Index>(*idx)] = 1;
    }
    else if (auto const* c = std::get_if<CoherentProduct>(&init))
    {
        std::vector<Complex> alpha(basis.num_modes(), 0);
        for (auto const& [name, a] : c->amplitudes)
            alpha[basis.mode_index(name)] = a;
        for (std::size_t s = 0; s < basis.size(); ++s)
        {
            Complex amp = 1;
            auto const& occ = basis.occupations(s);
            for (std::size_t m = 0; m < occ.size(); ++m)
            {
                // alpha^n / sqrt(n!), normalized at the end
                for (int k = 1; k <= occ[m]; ++k)
                    amp *= alpha[m] / std::sqrt(double(k));
            }
            psi[static_cast<Eigen::Index>(s)] = amp;
        }
    }
    else if (auto const* v = std::get_if<StateVector>(&init))
    {
        if (v->amplitudes.size() != basis.size())
            throw DomainError("state vector has "
                              + std::to_string(v->amplitudes.size())
                              + " amplitudes, basis has "
                              + std::to_string(basis.size()));
        for (std::size_t s = 0; s < basis.size(); ++s)
            psi[static_cast<Eigen::Index>(s)] = v->amplitudes[s];
    }
    else
    {
        auto const& r = std::get<RandomFixedNumber>(init);
        std::mt19937_64 rng(r.seed);
        std::normal_distribution<double> normal;
        for (std::size_t s = 0; s < basis.size(); ++s)
        {
            int total = 0;
            for (int o : basis.occupations(s))
                total += o;
            if (total == r.total)
                psi[static_cast<Eigen::Index>(s)] = {normal(rng), normal(rng)};
        }
    }
    double norm = psi.norm();
    if (!(norm > 0))
        throw DomainError("initial state has zero norm in this basis");
    return psi / norm;
}
}  // namespace detail

/*!
 * Build every operator for a system.
 *
 * Throws SizingError when the basis exceeds \c dimension_cap and
 * DomainError on a malformed term or a Hamiltonian that fails the
 * Hermiticity check.
 */
inline AssembledSystem assemble(LindbladSystem const& sys,
                                std::size_t dimension_cap = default_dimension_cap)
{
    FockBasis basis(sys.modes, sys.max_total_excitations, dimension_cap);
    Matrix h = detail::build_hamiltonian(basis, sys.hamiltonian);
    if (detail::hermiticity_error(h) > 1e-12)
        throw DomainError("assembled Hamiltonian is not Hermitian");

    auto n = static_cast<Eigen::Index>(basis.size());
    Matrix loss_sum = Matrix::Zero(n, n);
    std::vector<SparseMatrix> jumps, jumps_adjoint;
    std::vector<double> rates;
    for (auto const& j : sys.jumps)
    {
        if (!(j.rate >= 0) || !std::isfinite(j.rate))
            throw DomainError("loss rate on mode '" + j.mode
                              + "' must be non-negative");
        SparseMatrix a = basis.annihilation(basis.mode_index(j.mode));
        SparseMatrix l = std::sqrt(j.rate) * a;
        SparseMatrix ld = l.adjoint();
        loss_sum += Matrix(ld * l);
        jumps_adjoint.push_back(std::move(ld));
        jumps.push_back(std::move(l));
        rates.push_back(j.rate);
    }

    Vector psi = detail::initial_vector(basis, sys.initial);
    Matrix effective = h - Complex(0, 0.5) * loss_sum;
    Matrix rho0 = psi * psi.adjoint();
    return AssembledSystem{std::move(basis),
                           std::move(h),
                           std::move(jumps),
                           std::move(jumps_adjoint),
                           std::move(rates),
                           std::move(effective),
                           std::move(rho0)};
}

//! Right-hand side of the master equation for an assembled system
inline void lindblad_rhs(AssembledSystem const& sys, Matrix const& rho, Matrix& drho)
{
    Matrix x = sys.effective * rho;
    // rho is Hermitian, so rho K^dag = (K rho)^dag
    drho = Complex(0, -1) * (x - x.adjoint());
    for (std::size_t j = 0; j < sys.jumps.size(); ++j)
    {
        Matrix lr = sys.jumps[j] * rho;
        drho.noalias() += lr * sys.jumps_adjoint[j];
    }
}

//! Relative norm of [H, N_total]
inline double number_conservation_error(AssembledSystem const& sys)
{
    Eigen::VectorXd n = sys.basis.total_number_diagonal();
    double scale = sys.hamiltonian.norm();
    if (scale == 0)
        return 0;
    Matrix comm = sys.hamiltonian * n.asDiagonal();
    comm -= n.asDiagonal() * sys.hamiltonian;
    return comm.norm() / scale;
}

//---------------------------------------------------------------------------//
}  // namespace superrad::lindblad
