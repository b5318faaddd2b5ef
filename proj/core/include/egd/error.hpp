//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_ERROR_HPP
#define EGD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace egd {

/// Base class for all egd errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

/// Invalid configuration, schedule bounds, shapes, unknown keys, range
/// violations. Maps to CLI exit code 2.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string &what) : Error(what) {}
};

}  // namespace egd

#endif  // EGD_ERROR_HPP
