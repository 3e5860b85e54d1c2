#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace grope {

/// Base class for every error the engine throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed textual input: model documents, group words, bad flags.
struct ParseError : Error {
  using Error::Error;
};

/// A split plan that violates the partition rules for its target.
struct PlanError : Error {
  using Error::Error;
};

/// Structural misuse: dangling references, wrong kinds, non-dyadic shapes.
struct ShapeError : Error {
  using Error::Error;
};

/// An operation was invoked on a model that does not satisfy its entry
/// conditions (collisions too close, pending obligations, ...).
struct PreconditionError : Error {
  using Error::Error;
};

/// The exhaustive oracle was handed a ball larger than it enumerates.
struct OracleScaleError : Error {
  using Error::Error;
};

struct Model;

/// Object budget exhausted mid-rewrite; carries the partial model so the
/// caller can report how far the rewrite got.
struct BudgetError : Error {
  BudgetError(const std::string& what, std::string stage_,
              std::shared_ptr<const Model> partial_)
      : Error(what), stage(std::move(stage_)), partial(std::move(partial_)) {}

  std::string stage;
  std::shared_ptr<const Model> partial;
};

}  // namespace grope
