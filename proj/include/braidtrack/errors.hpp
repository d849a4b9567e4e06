#pragma once

#include <stdexcept>
#include <string>

namespace braidtrack {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error in a polynomial or braid-word expression; `position` is a
/// 0-based offset into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

class RootSolveError : public Error {
 public:
  using Error::Error;
};

class TrackError : public Error {
 public:
  using Error::Error;
};

/// Three or more strands share a real part at a crossing event.
class ImproperCrossingError : public Error {
 public:
  using Error::Error;
};

/// The real-part difference of the crossing pair has near-zero derivative.
class TransversalityError : public Error {
 public:
  using Error::Error;
};

/// A crossing landed too close to a segment endpoint for unambiguous
/// bookkeeping; the caller re-randomizes the loop geometry.
class EndpointCrossingError : public Error {
 public:
  using Error::Error;
};

class LambdaExhaustedError : public Error {
 public:
  using Error::Error;
};

class RoutingError : public Error {
 public:
  using Error::Error;
};

}  // namespace braidtrack
