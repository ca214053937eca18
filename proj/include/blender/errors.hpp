#ifndef BLENDER_ERRORS_HPP
#define BLENDER_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blender {

struct BlenderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Interval or polynomial operation outside its domain (division by an
// interval containing zero, enclosure over an interval not in the domain).
struct DomainError : BlenderError {
    using BlenderError::BlenderError;
};

// Non-rigorous Newton iteration failed to converge or left its bracket.
struct RootError : BlenderError {
    using BlenderError::BlenderError;
};

struct ConfigError : BlenderError {
    using BlenderError::BlenderError;
};

// No monotone branch of the first coordinate stretches across the slab.
struct CoverageError : BlenderError {
    using BlenderError::BlenderError;
};

// A freshly built target curve failed the through-box check.
struct ConstructionError : BlenderError {
    using BlenderError::BlenderError;
};

// A big tube left the domain box.
struct DomainEscapeError : BlenderError {
    using BlenderError::BlenderError;
};

struct FormatError : BlenderError {
    FormatError(const std::string& what, std::size_t line = 0)
        : BlenderError(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Construction guard tripped. Carries the (|L|, |P|) history up to that point.
struct NonTerminationError : BlenderError {
    NonTerminationError(const std::string& what, std::vector<std::pair<std::size_t, std::size_t>> history)
        : BlenderError(what), history_(std::move(history))
    {
    }
    const std::vector<std::pair<std::size_t, std::size_t>>& history() const noexcept { return history_; }

private:
    std::vector<std::pair<std::size_t, std::size_t>> history_;
};

} // namespace blender

#endif
