//---------------------------------------------------------------------------//
//! \file superrad/ode.hpp
//! Adaptive Dormand-Prince 5(4) integrator over Eigen dense states.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Core>

#include "error.hpp"

namespace superrad
{
//---------------------------------------------------------------------------//
struct OdeOptions
{
    double rtol{1e-9};
    double atol{1e-12};
    //! Zero selects a step from the initial derivative
    double initial_step{0};
    double max_step{std::numeric_limits<double>::infinity()};
    std::size_t max_steps{5'000'000};
};

struct OdeStats
{
    std::size_t accepted{0};
    std::size_t rejected{0};
    std::size_t rhs_calls{0};
};

//---------------------------------------------------------------------------//
/*!
 * Explicit embedded Runge-Kutta pair of Dormand and Prince with FSAL.
 *
 * \c State is any Eigen dense matrix or vector type. The right-hand side
 * is called as \c rhs(t, y, dydt) and must write into \c dydt. Steps are
 * clipped so that every requested output time is hit exactly; no dense
 * interpolation is involved, which keeps sampled values bit-reproducible.
 *
 * The error norm is the max-norm of the embedded error scaled by
 * atol + rtol * max(|y_old|, |y_new|) elementwise.
 */
template<class State>
class DormandPrince
{
  public:
    explicit DormandPrince(OdeOptions opts = {}) : opts_(opts) {}

    OdeStats const& stats() const { return stats_; }

    /*!
     * Advance \c y from \c t0 through each of \c times (ascending, >= t0),
     * calling \c observe(index, t, y) at every sample.
     */
    template<class Rhs, class Observer>
    void integrate(Rhs&& rhs,
                   State& y,
                   double t0,
                   std::span<double const> times,
                   Observer&& observe)
    {
        double t = t0;
        State k1 = State::Zero(y.rows(), y.cols());
        rhs(t, y, k1);
        ++stats_.rhs_calls;

        double h = opts_.initial_step > 0 ? opts_.initial_step
                                          : this->initial_step(y, k1, times, t0);
        for (std::size_t i = 0; i < times.size(); ++i)
        {
            double target = times[i];
            if (target < t)
                throw DomainError("DormandPrince: output times must ascend");
            while (t < target)
            {
                double remaining = target - t;
                bool last = h >= remaining;
                double step = last ? remaining : h;
                double err = this->attempt(rhs, t, y, k1, step);
                if (!std::isfinite(err))
                    throw IntegrationError(
                        "non-finite state during integration at t = "
                        + std::to_string(t));
                if (err <= 1)
                {
                    ++stats_.accepted;
                    t = last ? target : t + step;
                    y.swap(y_new_);
                    k1.swap(k7_);
                }
                else
                {
                    ++stats_.rejected;
                }
                double factor
                    = err == 0 ? 5.0
                               : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                if (err > 1 || !last)
                    h = std::min(step * factor, opts_.max_step);
                if (h < 1e-14 * std::max(std::abs(t), 1e-300))
                    throw IntegrationError(
                        "step size underflow at t = " + std::to_string(t));
                if (stats_.accepted + stats_.rejected > opts_.max_steps)
                    throw IntegrationError("step budget exhausted at t = "
                                           + std::to_string(t));
            }
            observe(i, t, y);
        }
    }

  private:
    template<class Rhs>
    double attempt(Rhs& rhs, double t, State const& y, State const& k1, double h)
    {
        // Butcher tableau
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                         c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                         a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                         a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        // Fifth minus fourth order weights
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                         e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        tmp_ = y + h * a21 * k1;
        rhs(t + c2 * h, tmp_, k2_);
        tmp_ = y + h * (a31 * k1 + a32 * k2_);
        rhs(t + c3 * h, tmp_, k3_);
        tmp_ = y + h * (a41 * k1 + a42 * k2_ + a43 * k3_);
        rhs(t + c4 * h, tmp_, k4_);
        tmp_ = y + h * (a51 * k1 + a52 * k2_ + a53 * k3_ + a54 * k4_);
        rhs(t + c5 * h, tmp_, k5_);
        tmp_ = y
               + h * (a61 * k1 + a62 * k2_ + a63 * k3_ + a64 * k4_
                      + a65 * k5_);
        rhs(t + h, tmp_, k6_);
        y_new_ = y
                 + h * (b1 * k1 + b3 * k3_ + b4 * k4_ + b5 * k5_
                        + b6 * k6_);
        rhs(t + h, y_new_, k7_);
        stats_.rhs_calls += 6;

        tmp_ = h * (e1 * k1 + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_
                    + e7 * k7_);
        auto scale = (opts_.atol
                      + opts_.rtol
                            * y.cwiseAbs().cwiseMax(y_new_.cwiseAbs()).array())
                         .eval();
        return (tmp_.cwiseAbs().array() / scale).maxCoeff();
    }

    double initial_step(State const& y,
                        State const& f0,
                        std::span<double const> times,
                        double t0) const
    {
        double span = times.empty() ? 1.0 : std::max(times.back() - t0, 0.0);
        double d0 = y.cwiseAbs().maxCoeff();
        double d1 = f0.cwiseAbs().maxCoeff();
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * std::max(span, 1e-300)
                                            : 0.01 * d0 / d1;
        h = std::min({h, span > 0 ? span : h, opts_.max_step});
        return std::max(h, 1e-12 * std::max(span, 1e-300));
    }

    OdeOptions opts_;
    OdeStats stats_;
    State tmp_, k2_, k3_, k4_, k5_, k6_, k7_, y_new_;
};

//---------------------------------------------------------------------------//
}  // namespace superrad
