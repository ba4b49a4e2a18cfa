#pragma once

#include <stdexcept>
#include <string>

namespace koszul {

// Bad user input: malformed presentations, unknown names, invalid relations.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A computation needed data beyond the stored truncation window.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant failed; indicates an engine bug, not a user mistake.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void engine_check(bool ok, const std::string& what) {
    if (!ok) throw InternalError(what);
}

}  // namespace koszul
