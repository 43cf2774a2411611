//---------------------------------------------------------------------------//
//! \file superrad/rate_equation.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "error.hpp"
#include "ode.hpp"
#include "units.hpp"

namespace superrad
{
//---------------------------------------------------------------------------//
struct RateEquationParams
{
    Rate gain;
    Rate loss;
    double initial_occupation{0};
    double source_atoms{0};
    Time horizon;
    bool deplete_source{false};
    //! Spontaneous decay of the source; only used when depleting
    Rate natural_rate;
    //! Number of equally spaced samples including t = 0 and the horizon
    std::size_t samples{101};
    OdeOptions ode{};
};

struct RateTrajectory
{
    std::vector<double> times;
    std::vector<double> occupation_M;
    std::vector<double> source_N;
    //! Cumulative number of decays
    std::vector<double> emitted_total;
};

/*!
 * Integrate the mode occupation M of dM/dt = G (M+1) - L M.
 *
 * Without depletion G stays fixed and the source count N is constant.
 * With depletion G(t) = Gamma Omega N(t), where Gamma Omega = G/N0, and the
 * source loses atoms to spontaneous decay and to stimulated emission into
 * the mode:
 *
 *   dN/dt = -Gamma N - Gamma Omega N M.
 *
 * This stimulated-loss term is the minimal extension of the undepleted
 * model and is not part of the steady-state analysis in gain.hpp.
 */
inline RateTrajectory integrate_rate_equation(RateEquationParams const& p)
{
    for (double v : {p.gain.si(), p.loss.si(), p.initial_occupation,
                     p.source_atoms, p.horizon.si(), p.natural_rate.si()})
    {
        if (!std::isfinite(v))
            throw DomainError("integrate_rate_equation: non-finite parameter");
    }
    if (!(p.horizon.si() > 0))
        throw DomainError("integrate_rate_equation: horizon must be positive");
    if (p.gain.si() < 0 || p.loss.si() < 0 || p.initial_occupation < 0
        || p.source_atoms < 0)
        throw DomainError(
            "integrate_rate_equation: rates and populations must be "
            "non-negative");
    if (p.samples < 2)
        throw DomainError("integrate_rate_equation: need at least 2 samples");

    double const G = p.gain.si();
    double const L = p.loss.si();
    double const gamma = p.natural_rate.si();
    double const coupling = p.source_atoms > 0 ? G / p.source_atoms : 0.0;
    bool const deplete = p.deplete_source;
    double const n0 = p.source_atoms;

    // State: (M, N, emitted)
    using State = Eigen::Vector3d;
    auto rhs = [&](double, State const& y, State& dy) {
        double m = y[0];
        double n = deplete ? y[1] : n0;
        double g_now = deplete ? coupling * n : G;
        double stimulated = coupling * n * m;
        dy[0] = g_now * (m + 1) - L * m;
        dy[1] = deplete ? -gamma * n - stimulated : 0.0;
        dy[2] = gamma * n + stimulated;
    };

    std::vector<double> times(p.samples);
    for (std::size_t i = 0; i < p.samples; ++i)
        times[i] = p.horizon.si() * double(i) / double(p.samples - 1);

    RateTrajectory out;
    out.times = times;
    out.occupation_M.resize(p.samples);
    out.source_N.resize(p.samples);
    out.emitted_total.resize(p.samples);

    State y{p.initial_occupation, n0, 0.0};
    DormandPrince<State> solver(p.ode);
    solver.integrate(rhs, y, 0.0, times, [&](std::size_t i, double, State const& s) {
        out.occupation_M[i] = s[0];
        out.source_N[i] = s[1];
        out.emitted_total[i] = s[2];
    });
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace superrad
