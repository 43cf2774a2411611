//---------------------------------------------------------------------------//
//! \file superrad/lindblad/reference.hpp
//! Dense Liouvillian exponential: an integrator-free reference for evolve().
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "evolve.hpp"

namespace superrad::lindblad
{
inline constexpr std::size_t reference_dimension_cap = 200;

/*!
 * Liouvillian superoperator acting on column-stacked vec(rho).
 *
 * Uses vec(A X B) = (B^T kron A) vec(X).
 */
inline Matrix liouvillian(AssembledSystem const& sys)
{
    auto n = static_cast<Eigen::Index>(sys.dimension());
    Matrix id = Matrix::Identity(n, n);
    Matrix sup = Complex(0, -1)
                 * (Matrix(Eigen::kroneckerProduct(id, sys.effective))
                    - Matrix(Eigen::kroneckerProduct(sys.effective.conjugate(), id)));
    for (auto const& l : sys.jumps)
    {
        Matrix dense(l);
        sup += Eigen::kroneckerProduct(dense.conjugate(), dense);
    }
    return sup;
}

/*!
 * Propagate vec(rho) with exp(L dt) between equally spaced samples.
 *
 * One Pade exponential of the step propagator is applied repeatedly, so
 * sample k sees exp(L dt)^k = exp(L t_k) with no time-stepping error
 * control involved.
 */
inline ObservableTrajectory
matrix_exponential_reference(LindbladSystem const& system,
                             double horizon,
                             std::size_t samples,
                             std::vector<Observable> const& observables)
{
    auto sys = assemble(system, reference_dimension_cap);
    auto times = detail::sample_times(horizon, samples);
    auto probes = detail::make_probes(sys, observables);
    auto out = detail::empty_trajectory(times, observables);

    auto n = static_cast<Eigen::Index>(sys.dimension());
    double dt = times[1] - times[0];
    Matrix step = (liouvillian(sys) * Complex(dt)).exp();

    Vector v = Eigen::Map<Vector const>(sys.rho0.data(), n * n);
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        if (i > 0)
            v = step * v;
        Matrix rho = Eigen::Map<Matrix const>(v.data(), n, n);
        detail::record(out, probes, i, rho, true);
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace superrad::lindblad
