#ifndef RREX_ERRORS_HPP
#define RREX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rrex {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible matrix/vector dimensions.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A numerical kernel failed (non-convergence, non-finite input, ...).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// A nonzero numerical rank was required but the matrix is numerically zero.
class ZeroRankError : public Error {
public:
  using Error::Error;
};

/// Invalid problem or configuration parameter value.
class InvalidParameterError : public Error {
public:
  using Error::Error;
};

/// Fixed-point iteration produced a non-finite iterate or left the trust
/// radius; carries the index of the offending iterate.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, long index)
      : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

private:
  long index_;
};

/// Extrapolation window whose second differences vanish while the first
/// difference does not; no finite extrapolant exists.
class DegenerateWindowError : public Error {
public:
  using Error::Error;
};

/// No window size up to k_max brought the relative least-squares residual
/// below the degree tolerance.
class DegreeDetectionError : public Error {
public:
  using Error::Error;
};

/// Configuration file / flag error; carries a 1-based line number when the
/// error is attributable to a config file line (0 otherwise).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// A diagnostic was requested that needs data the problem does not carry
/// (typically a known solution).
class UnsupportedDiagnosticError : public Error {
public:
  using Error::Error;
};

}  // namespace rrex

#endif
