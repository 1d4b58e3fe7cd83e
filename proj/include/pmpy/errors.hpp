#pragma once

#include <stdexcept>
#include <string>

namespace pmpy {

/// Argument outside the mathematical domain of an operation (negative volume,
/// field point inside a sphere, non-positive period, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A control-space state the far-field model cannot describe: overlapping
/// spheres, a bladder volume outside the admissible band, or a rod-force
/// inversion whose denominator has changed sign.
class ModelValidityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Stroke parameters that do not describe a valid closed stroke.
class ConstructionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedOperation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Adaptive quadrature hit its refinement limit before meeting the tolerance.
class IntegrationAccuracyError : public std::runtime_error {
  public:
    IntegrationAccuracyError(const std::string &what, double achieved, double requested)
        : std::runtime_error(what), achieved_(achieved), requested_(requested) {}

    double achieved_error() const noexcept { return achieved_; }
    double requested_error() const noexcept { return requested_; }

  private:
    double achieved_;
    double requested_;
};

} // namespace pmpy
