#pragma once

#include <stdexcept>
#include <string>

namespace iho {

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Grid too coarse for the oscillation it has to resolve.
class AliasError : public Error
{
  public:
    using Error::Error;
};

// Grid does not cover the function (support escapes, mass truncated).
class DomainError : public Error
{
  public:
    using Error::Error;
};

// Operation undefined in the given representation.
class RepError : public Error
{
  public:
    using Error::Error;
};

// Requested derivative order exceeds what the packet family supplies exactly.
class OrderError : public Error
{
  public:
    using Error::Error;
};

class ConvergenceError : public Error
{
  public:
    using Error::Error;
};

class HermiticityError : public Error
{
  public:
    using Error::Error;
};

class SingularTimeError : public Error
{
  public:
    using Error::Error;
};

class MassLeakError : public Error
{
  public:
    using Error::Error;
};

class GridMismatchError : public Error
{
  public:
    using Error::Error;
};

class OverflowError : public Error
{
  public:
    using Error::Error;
};

class ValidationError : public Error
{
  public:
    ValidationError(std::string field, std::string const& what)
        : Error(field + ": " + what), field_(std::move(field))
    {
    }
    std::string const& field() const noexcept { return field_; }

  private:
    std::string field_;
};

}  // namespace iho
