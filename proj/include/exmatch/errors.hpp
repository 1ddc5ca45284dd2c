#pragma once

#include <stdexcept>
#include <string>

namespace exmatch {

// Violated preconditions, malformed inputs, stale handles.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or search cap was hit. Callers must not treat the partial
// work as an answer; we abort instead of silently truncating.
class BudgetError : public std::runtime_error {
public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exmatch
