#pragma once

#include <stdexcept>
#include <string>

namespace flsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A referenced element (generator, bustie, building, tie) does not exist.
struct NotFoundError : Error {
    using Error::Error;
};

// An operation was called outside its stated precondition.
struct PreconditionError : Error {
    using Error::Error;
};

// An input structure does not cover everything the operation needs
// (e.g. a snapshot missing breaker statuses).
struct IncompleteInputError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Malformed input text. Line/column are 1-based; 0 means unknown.
struct FileParseError : Error {
    FileParseError(std::string path_, int line_, int column_, const std::string& what_)
        : Error(path_ + (line_ > 0 ? ":" + std::to_string(line_) +
                                         (column_ > 0 ? ":" + std::to_string(column_) : "")
                                   : "") +
                ": " + what_),
          path(std::move(path_)),
          line(line_),
          column(column_) {}

    std::string path;
    int line = 0;
    int column = 0;
};

}  // namespace flsim
