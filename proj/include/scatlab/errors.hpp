#pragma once

#include <stdexcept>
#include <string>

namespace scatlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Invalid user configuration (shape documents, grids, solver settings).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// The forward solver could not meet its boundary residual certificate.
class ResidualTooLarge : public Error {
  public:
    ResidualTooLarge(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Far-field data too coarsely sampled for trigonometric interpolation.
class InterpolationDegeneracy : public Error {
  public:
    InterpolationDegeneracy(const std::string& what, double tail_fraction)
        : Error(what), tail_fraction_(tail_fraction) {}
    double tail_fraction() const noexcept { return tail_fraction_; }

  private:
    double tail_fraction_;
};

/// Patterns or matrices with incompatible wavenumber, direction or grid.
class MetadataMismatch : public Error {
  public:
    using Error::Error;
};

/// Malformed or unreadable data file.
class FormatError : public Error {
  public:
    using Error::Error;
};

}  // namespace scatlab
