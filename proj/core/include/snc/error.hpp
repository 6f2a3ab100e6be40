#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace snc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model object (distribution, chain, network) violates its invariants.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// Transition matrix is not irreducible.
class ReducibleChain : public InvalidModel {
 public:
  ReducibleChain(const std::string& what, std::vector<std::size_t> unreachable)
      : InvalidModel(what), unreachable_(std::move(unreachable)) {}

  const std::vector<std::size_t>& unreachable_states() const { return unreachable_; }

 private:
  std::vector<std::size_t> unreachable_;
};

/// Power iteration hit its cap before meeting the tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), residual_(last_residual) {}

  double last_residual() const { return residual_; }

 private:
  double residual_;
};

/// A generating function was evaluated at or beyond its radius of convergence.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t pole)
      : Error(what), pole_(pole) {}

  std::size_t pole_index() const { return pole_; }

 private:
  std::size_t pole_;
};

/// A server has mean load >= 1.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, std::size_t server)
      : Error(what), server_(server) {}

  std::size_t server() const { return server_; }

 private:
  std::size_t server_;
};

/// theta outside the admissible domain of a bound.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Martingale localization requested at a server that fails the topology
/// or constant-rate preconditions.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(const std::string& what, std::vector<std::string> items)
      : Error(what), items_(std::move(items)) {}

  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
};

/// Malformed network document. `field()` is a JSON pointer to the offending field.
class ParseError : public Error {
 public:
  enum class Kind {
    Syntax,       // not valid JSON
    Schema,       // missing field, wrong type, unknown tag
    Path,         // flow path not an interval of the servers
    MissingFlow,  // no flow 1 spanning every server
    Model,        // chain or distribution invariant violated
  };

  ParseError(Kind kind, const std::string& field, const std::string& message)
      : Error(field + ": " + message), kind_(kind), field_(field) {}

  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

}  // namespace snc
