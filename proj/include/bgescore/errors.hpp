#ifndef BGESCORE_ERRORS_HPP
#define BGESCORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix expected to be symmetric positive definite was not.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
struct DomainError : Error {
  using Error::Error;
};

// Malformed input text (CSV or graph file).  Message names the location.
struct ParseError : Error {
  using Error::Error;
};

// Dataset with no observation rows.
struct EmptyData : Error {
  using Error::Error;
};

// Variable names in one input do not match those in another.
struct SchemaError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// node/parent-set pair that does not describe a valid family.
struct InvalidFamily : Error {
  using Error::Error;
};

struct CyclicGraph : Error {
  using Error::Error;
};

// Edge move that cannot be applied to the given graph.
struct IllegalMove : Error {
  using Error::Error;
};

// Invalid prior or run configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace bge

#endif
