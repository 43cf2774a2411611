//---------------------------------------------------------------------------//
//! \file superrad/lindblad/basis.hpp
//! Truncated multimode bosonic Fock space.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "../error.hpp"

namespace superrad::lindblad
{
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t default_dimension_cap = 4096;

namespace detail
{
//! Exact below 2^64, scientific beyond
inline std::string format_count(long double n)
{
    if (n < 1.8e19L)
        return std::to_string(static_cast<unsigned long long>(n));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3Le", n);
    return buf;
}
}  // namespace detail

//! One bosonic mode; occupations run over 0 .. truncation-1
struct ModeSpec
{
    std::string name;
    int truncation{2};

    friend bool operator==(ModeSpec const&, ModeSpec const&) = default;
};

//---------------------------------------------------------------------------//
/*!
 * Product Fock basis, optionally restricted to total occupation <= cap.
 *
 * The restriction keeps number-conserving problems small: a loss-only
 * Lindbladian never raises the total, so the sector below the initial
 * total is closed. Raising operators that would leave the basis (past a
 * mode truncation or past the total cap) map to zero.
 *
 * States are ordered lexicographically with the first mode most
 * significant.
 */
class FockBasis
{
  public:
    FockBasis(std::vector<ModeSpec> modes,
              std::optional<int> max_total = {},
              std::size_t dimension_cap = default_dimension_cap)
        : modes_(std::move(modes)), max_total_(max_total)
    {
        if (modes_.empty())
            throw DomainError("FockBasis: at least one mode required");
        long double product = 1;
        std::string factors;
        for (auto const& m : modes_)
        {
            if (m.truncation < 2)
                throw DomainError("mode '" + m.name
                                  + "': truncation must be >= 2");
            for (auto const& other : modes_)
            {
                if (&other != &m && other.name == m.name)
                    throw DomainError("duplicate mode name '" + m.name + "'");
            }
            product *= m.truncation;
            factors += (factors.empty() ? "" : " x ")
                       + std::to_string(m.truncation);
        }
        if (max_total_ && *max_total_ < 0)
            throw DomainError("FockBasis: max_total must be non-negative");

        if (!max_total_ && product > static_cast<long double>(dimension_cap))
            throw SizingError("Hilbert dimension " + factors + " = "
                              + detail::format_count(product)
                              + " exceeds cap "
                              + std::to_string(dimension_cap));

        std::vector<int> occ(modes_.size(), 0);
        enumerate(0, 0, occ, dimension_cap, factors);
        for (std::size_t i = 0; i < states_.size(); ++i)
            index_.emplace(states_[i], i);
    }

    std::size_t size() const { return states_.size(); }
    std::size_t num_modes() const { return modes_.size(); }
    std::vector<ModeSpec> const& modes() const { return modes_; }
    std::optional<int> max_total() const { return max_total_; }

    std::vector<int> const& occupations(std::size_t state) const
    {
        return states_[state];
    }

    std::optional<std::size_t> index_of(std::vector<int> const& occ) const
    {
        auto it = index_.find(occ);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t mode_index(std::string const& name) const
    {
        for (std::size_t i = 0; i < modes_.size(); ++i)
        {
            if (modes_[i].name == name)
                return i;
        }
        throw DomainError("unknown mode '" + name + "'");
    }

    //! Annihilation operator of one mode
    SparseMatrix annihilation(std::size_t mode) const
    {
        std::vector<Eigen::Triplet<Complex>> trip;
        for (std::size_t col = 0; col < states_.size(); ++col)
        {
            auto occ = states_[col];
            int n = occ[mode];
            if (n == 0)
                continue;
            occ[mode] = n - 1;
            auto row = index_of(occ);
            if (row)
                trip.emplace_back(*row, col, std::sqrt(double(n)));
        }
        SparseMatrix a(size(), size());
        a.setFromTriplets(trip.begin(), trip.end());
        return a;
    }

    //! Diagonal of a mode's number operator
    Eigen::VectorXd number_diagonal(std::size_t mode) const
    {
        Eigen::VectorXd d(size());
        for (std::size_t i = 0; i < states_.size(); ++i)
            d[i] = states_[i][mode];
        return d;
    }

    Eigen::VectorXd total_number_diagonal() const
    {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(size());
        for (std::size_t m = 0; m < modes_.size(); ++m)
            d += number_diagonal(m);
        return d;
    }

  private:
    void enumerate(std::size_t mode,
                   int total,
                   std::vector<int>& occ,
                   std::size_t cap,
                   std::string const& factors)
    {
        if (mode == modes_.size())
        {
            if (states_.size() == cap)
                throw SizingError("Hilbert dimension " + factors
                                  + " restricted to total <= "
                                  + std::to_string(*max_total_)
                                  + " exceeds cap " + std::to_string(cap));
            states_.push_back(occ);
            return;
        }
        for (int n = 0; n < modes_[mode].truncation; ++n)
        {
            if (max_total_ && total + n > *max_total_)
                break;
            occ[mode] = n;
            enumerate(mode + 1, total + n, occ, cap, factors);
        }
        occ[mode] = 0;
    }

    std::vector<ModeSpec> modes_;
    std::optional<int> max_total_;
    std::vector<std::vector<int>> states_;
    std::map<std::vector<int>, std::size_t> index_;
};

//---------------------------------------------------------------------------//
}  // namespace superrad::lindblad
