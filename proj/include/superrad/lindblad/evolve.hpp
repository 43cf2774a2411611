//---------------------------------------------------------------------------//
//! \file superrad/lindblad/evolve.hpp
//! Master-equation integration and the single-body loss check.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "../ode.hpp"
#include "system.hpp"

namespace superrad::lindblad
{
//---------------------------------------------------------------------------//
// OBSERVABLES
//---------------------------------------------------------------------------//
struct Observable
{
    enum class Kind
    {
        total_number,  //!< sum_i a_i^dag a_i over every mode
        mode_number,  //!< a^dag a of one mode
        mode_coherence,  //!< |<a>| of one mode
    };
    Kind kind{Kind::total_number};
    std::string mode;

    static Observable total() { return {Kind::total_number, {}}; }
    static Observable number(std::string m) { return {Kind::mode_number, std::move(m)}; }
    static Observable coherence(std::string m)
    {
        return {Kind::mode_coherence, std::move(m)};
    }

    std::string name() const
    {
        switch (kind)
        {
            case Kind::total_number: return "N_total";
            case Kind::mode_number: return "n_" + mode;
            case Kind::mode_coherence: return "coh_" + mode;
        }
        return "?";
    }
};

//! Total number plus occupation and coherence of every mode
inline std::vector<Observable> default_observables(LindbladSystem const& sys)
{
    std::vector<Observable> out{Observable::total()};
    for (auto const& m : sys.modes)
        out.push_back(Observable::number(m.name));
    for (auto const& m : sys.modes)
        out.push_back(Observable::coherence(m.name));
    return out;
}

namespace detail
{
//! Precomputed operator for one observable
struct ObservableProbe
{
    Observable::Kind kind;
    Eigen::VectorXd diagonal;
    SparseMatrix lowering;
};

inline std::vector<ObservableProbe> make_probes(AssembledSystem const& sys,
                                                std::vector<Observable> const& obs)
{
    std::vector<ObservableProbe> probes;
    for (auto const& o : obs)
    {
        ObservableProbe p{o.kind, {}, {}};
        switch (o.kind)
        {
            case Observable::Kind::total_number:
                p.diagonal = sys.basis.total_number_diagonal();
                break;
            case Observable::Kind::mode_number:
                p.diagonal = sys.basis.number_diagonal(sys.basis.mode_index(o.mode));
                break;
            case Observable::Kind::mode_coherence:
                p.lowering = sys.basis.annihilation(sys.basis.mode_index(o.mode));
                break;
        }
        probes.push_back(std::move(p));
    }
    return probes;
}

inline double measure(ObservableProbe const& p, Matrix const& rho)
{
    if (p.kind == Observable::Kind::mode_coherence)
    {
        // <a> = Tr(a rho)
        Complex tr = 0;
        for (int k = 0; k < p.lowering.outerSize(); ++k)
        {
            for (SparseMatrix::InnerIterator it(p.lowering, k); it; ++it)
                tr += it.value() * rho(it.col(), it.row());
        }
        return std::abs(tr);
    }
    return (p.diagonal.array() * rho.diagonal().real().array()).sum();
}
}  // namespace detail

//---------------------------------------------------------------------------//
// TRAJECTORIES
//---------------------------------------------------------------------------//
/*!
 * Sampled expectation values plus health diagnostics of the density
 * operator along the run.
 */
struct ObservableTrajectory
{
    std::vector<double> times;
    std::vector<std::string> names;
    //! values[k][i]: observable k at times[i]
    std::vector<std::vector<double>> values;

    //! max |Tr rho - 1| over samples
    double max_trace_deviation{0};
    //! max element of |rho - rho^dag| over samples
    double max_hermiticity_error{0};
    //! Smallest density-operator eigenvalue seen (0 if not checked)
    double min_eigenvalue{0};

    std::vector<double> const& column(std::string const& name) const
    {
        for (std::size_t k = 0; k < names.size(); ++k)
        {
            if (names[k] == name)
                return values[k];
        }
        throw DomainError("trajectory has no observable '" + name + "'");
    }
};

struct EvolveOptions
{
    //! Equally spaced samples including t = 0 and the horizon
    std::size_t samples{51};
    //! Tight enough for 1e-7 relative agreement with the exponential reference
    OdeOptions ode{1e-10, 1e-13};
    std::size_t dimension_cap{default_dimension_cap};
    //! Diagonalize rho at each sample to track positivity
    bool check_positivity{true};
};

namespace detail
{
inline std::vector<double> sample_times(double horizon, std::size_t samples)
{
    if (!(horizon > 0) || !std::isfinite(horizon))
        throw DomainError("horizon must be positive and finite");
    if (samples < 2)
        throw DomainError("need at least 2 samples");
    std::vector<double> t(samples);
    for (std::size_t i = 0; i < samples; ++i)
        t[i] = horizon * double(i) / double(samples - 1);
    return t;
}

inline void record(ObservableTrajectory& out,
                   std::vector<ObservableProbe> const& probes,
                   std::size_t i,
                   Matrix const& rho,
                   bool positivity)
{
    for (std::size_t k = 0; k < probes.size(); ++k)
        out.values[k][i] = measure(probes[k], rho);
    out.max_trace_deviation = std::max(out.max_trace_deviation,
                                       std::abs(rho.trace().real() - 1.0));
    out.max_hermiticity_error = std::max(
        out.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    if (positivity)
    {
        Matrix herm = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
        out.min_eigenvalue = std::min(out.min_eigenvalue, es.eigenvalues().minCoeff());
    }
}

inline ObservableTrajectory empty_trajectory(std::vector<double> times,
                                             std::vector<Observable> const& obs)
{
    ObservableTrajectory out;
    out.names.reserve(obs.size());
    for (auto const& o : obs)
        out.names.push_back(o.name());
    out.values.assign(obs.size(), std::vector<double>(times.size()));
    out.times = std::move(times);
    return out;
}
}  // namespace detail

/*!
 * Integrate drho/dt = -i[H,rho] + sum_j (L_j rho L_j^dag - {L_j^dag L_j, rho}/2).
 *
 * Dense Dormand-Prince integration of the full density operator. Identical
 * inputs and options give bit-identical output.
 */
inline ObservableTrajectory evolve(AssembledSystem const& sys,
                                   double horizon,
                                   std::vector<Observable> const& observables,
                                   EvolveOptions const& opts = {})
{
    auto times = detail::sample_times(horizon, opts.samples);
    auto probes = detail::make_probes(sys, observables);
    auto out = detail::empty_trajectory(times, observables);

    Matrix rho = sys.rho0;
    DormandPrince<Matrix> solver(opts.ode);
    solver.integrate(
        [&sys](double, Matrix const& r, Matrix& dr) { lindblad_rhs(sys, r, dr); },
        rho,
        0.0,
        times,
        [&](std::size_t i, double, Matrix const& r) {
            detail::record(out, probes, i, r, opts.check_positivity);
        });
    return out;
}

inline ObservableTrajectory evolve(LindbladSystem const& sys,
                                   double horizon,
                                   std::vector<Observable> const& observables,
                                   EvolveOptions const& opts = {})
{
    return evolve(assemble(sys, opts.dimension_cap), horizon, observables, opts);
}

//---------------------------------------------------------------------------//
// SINGLE-BODY LOSS
//---------------------------------------------------------------------------//
struct DecayCheck
{
    //! max_t |<N(t)> - <N(0)> e^{-gamma t}| / <N(0)>
    double max_deviation{0};
    double gamma{0};
    double initial_number{0};
    ObservableTrajectory trajectory;
};

/*!
 * Evolve and compare the total number with N(0) e^{-gamma t}.
 *
 * Preconditions, each machine-checked and reported by name on failure:
 *  - every mode carries exactly one loss jump, all with the same rate;
 *  - the Hamiltonian commutes with the total number operator to 1e-10
 *    relative (Frobenius norm).
 */
inline DecayCheck verify_exponential_decay(LindbladSystem const& sys,
                                           double horizon,
                                           EvolveOptions const& opts = {})
{
    double gamma = -1;
    for (auto const& m : sys.modes)
    {
        auto count = std::count_if(sys.jumps.begin(),
                                   sys.jumps.end(),
                                   [&](LossJump const& j) { return j.mode == m.name; });
        if (count != 1)
            throw PreconditionError(
                "uniform loss: mode '" + m.name + "' has "
                + std::to_string(count) + " loss jumps, expected exactly 1");
    }
    for (auto const& j : sys.jumps)
    {
        if (gamma < 0)
            gamma = j.rate;
        else if (j.rate != gamma)
            throw PreconditionError(
                "uniform loss: jump rates differ (" + std::to_string(gamma)
                + " vs " + std::to_string(j.rate) + " on mode '" + j.mode + "')");
    }
    auto assembled = assemble(sys, opts.dimension_cap);
    double err = number_conservation_error(assembled);
    if (err > 1e-10)
        throw PreconditionError(
            "number conservation: ||[H, N]|| / ||H|| = " + std::to_string(err)
            + " exceeds 1e-10");

    DecayCheck out;
    out.gamma = gamma;
    out.trajectory = evolve(assembled, horizon, {Observable::total()}, opts);
    auto const& n = out.trajectory.values[0];
    out.initial_number = n.front();
    if (out.initial_number == 0)
        return out;
    for (std::size_t i = 0; i < n.size(); ++i)
    {
        double expected = out.initial_number * std::exp(-gamma * out.trajectory.times[i]);
        out.max_deviation = std::max(out.max_deviation,
                                     std::abs(n[i] - expected) / out.initial_number);
    }
    return out;
}

//---------------------------------------------------------------------------//
// TRUNCATION
//---------------------------------------------------------------------------//
/*!
 * Maximum pointwise relative difference between two trajectories sampled
 * on the same grid. The denominator of each point is floored at
 * \c floor times the observable's peak magnitude so that values passing
 * through zero do not dominate.
 */
inline double max_relative_difference(ObservableTrajectory const& a,
                                      ObservableTrajectory const& b,
                                      double floor = 1e-6)
{
    double worst = 0;
    for (std::size_t k = 0; k < b.names.size(); ++k)
    {
        auto const& ref = b.values[k];
        auto const& got = a.column(b.names[k]);
        double peak = 0;
        for (double v : ref)
            peak = std::max(peak, std::abs(v));
        for (std::size_t i = 0; i < ref.size(); ++i)
        {
            double denom = std::max({std::abs(ref[i]), floor * peak,
                                     std::numeric_limits<double>::min()});
            worst = std::max(worst, std::abs(got[i] - ref[i]) / denom);
        }
    }
    return worst;
}

struct TruncationCheck
{
    double max_relative_change{0};
    bool adequate{true};
};

/*!
 * Rerun with every mode truncation (and the total cap, if any) raised by
 * two and compare all observables. Changes above \c tolerance flag the
 * original truncation as inadequate.
 */
inline TruncationCheck check_truncation(LindbladSystem const& sys,
                                        double horizon,
                                        std::vector<Observable> const& observables,
                                        EvolveOptions const& opts = {},
                                        double tolerance = 1e-7)
{
    LindbladSystem bigger = sys;
    for (auto& m : bigger.modes)
        m.truncation += 2;
    if (bigger.max_total_excitations)
        *bigger.max_total_excitations += 2;
    if (std::holds_alternative<StateVector>(sys.initial))
        throw PreconditionError(
            "truncation check needs a basis-independent initial state");
    auto base = evolve(sys, horizon, observables, opts);
    auto wide = evolve(bigger, horizon, observables, opts);
    TruncationCheck c;
    c.max_relative_change = max_relative_difference(base, wide);
    c.adequate = c.max_relative_change < tolerance;
    return c;
}

//---------------------------------------------------------------------------//
}  // namespace superrad::lindblad
