#ifndef FRACVISC_ERRORS_HPP
#define FRACVISC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracvisc
{

/// Argument outside the mathematical domain of a function (poles, z > 0, t < 0, ...).
class DomainError : public std::domain_error
{
public:
   using std::domain_error::domain_error;
};

/// Malformed or inconsistent input data (shapes, signs, symmetry, config schema).
class ValidationError : public std::invalid_argument
{
public:
   using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public std::runtime_error
{
public:
   using std::runtime_error::runtime_error;
};

/// Compatibility recursion requested beyond what a weakly singular kernel allows.
class SingularKernelError : public DomainError
{
public:
   using DomainError::DomainError;
};

} // namespace fracvisc

#endif // FRACVISC_ERRORS_HPP
