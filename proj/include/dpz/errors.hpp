#pragma once

#include <stdexcept>
#include <string>

namespace dpz {

/// Caller handed us data that violates a documented precondition.
struct input_error : std::invalid_argument {
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Structural validation of fibration or surface data failed.
struct validation_error : input_error {
  explicit validation_error(const std::string& what) : input_error(what) {}
};

/// A positivity assertion that ampleness of H would guarantee is violated.
struct ampleness_error : std::runtime_error {
  std::string check_id;
  ampleness_error(std::string id, const std::string& what)
      : std::runtime_error(what), check_id(std::move(id)) {}
};

/// The surface type is outside the range the constructors cover.
struct unsupported_error : std::runtime_error {
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

/// Picard rank one: the ample cone is the ray spanned by -K, and a polar
/// cylinder for any ample class is a rescaled anticanonical one. Nothing
/// to construct case by case.
struct rho_one_error : std::runtime_error {
  explicit rho_one_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpz
