//---------------------------------------------------------------------------//
//! \file superrad/error.hpp
//! Exception hierarchy shared by every superrad module.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace superrad
{
//---------------------------------------------------------------------------//
/*!
 * Base of all library errors.
 *
 * The CLI maps subclasses onto exit codes: input problems (domain, parse,
 * validation, precondition) exit with 2, capability refusals (sizing,
 * regime) with 3.
 */
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Argument outside the mathematical domain of an operation
class DomainError : public Error
{
  public:
    using Error::Error;
};

//! Precondition of a theorem or algorithm not met by the input
class PreconditionError : public Error
{
  public:
    using Error::Error;
};

//! Scenario or system document failed an invariant
class ValidationError : public Error
{
  public:
    ValidationError(std::string field, std::string const& what)
        : Error(field + ": " + what), field_(std::move(field)), reason_(what)
    {
    }

    std::string const& field() const noexcept { return field_; }
    std::string const& reason() const noexcept { return reason_; }

  private:
    std::string field_;
    std::string reason_;
};

//! Malformed document, with 1-based position when known
class ParseError : public Error
{
  public:
    ParseError(std::string const& what, int line = 0, int column = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ", column "
                               + std::to_string(column) + ": " + what
                         : what)
        , line_(line)
        , column_(column)
    {
    }

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

//! Problem too large for the configured dense-matrix cap
class SizingError : public Error
{
  public:
    using Error::Error;
};

//! Request outside the validity regime of a model
class RegimeError : public Error
{
  public:
    using Error::Error;
};

//! Adaptive integrator could not meet its tolerance
class IntegrationError : public Error
{
  public:
    using Error::Error;
};

//---------------------------------------------------------------------------//
}  // namespace superrad
