#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace duvio {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A referenced file is missing or unreadable.
class LoadError : public Error {
 public:
  LoadError(std::string path, const std::string& what)
      : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Data violates an invariant; `index()` is the first offending row/element.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace duvio
