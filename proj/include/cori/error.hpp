#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cori {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A required input file is missing or unreadable.
class FileError : public Error {
 public:
  using Error::Error;
};

// Malformed file content; the message names the file and line.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what) {}
};

// Argument outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace cori
