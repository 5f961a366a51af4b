#ifndef CLANSIM_ERROR_HPP
#define CLANSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace clansim {

enum class ErrorKind {
  InvalidParameter,
  InvalidIndividual,
  ContractViolation,
  Unbounded,
  Truncated,
  TooLarge,
  Config,
  SupportMismatch,
  Io,
};

/// Single exception type for the library; `kind()` lets callers map failures
/// to exit codes without string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace clansim

#endif  // CLANSIM_ERROR_HPP
