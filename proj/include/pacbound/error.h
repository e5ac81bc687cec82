// Copyright 2026 The pacbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PACBOUND_ERROR_H_
#define PACBOUND_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pacbound {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A file could not be opened or written.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(what + ": " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Malformed input record. `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Label outside {-1, 0, +1}.
class LabelError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

// SMO did not reach the KKT tolerance. Carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> alphas,
                   double residual)
      : Error(what), alphas_(std::move(alphas)), residual_(residual) {}
  const std::vector<double>& alphas() const { return alphas_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> alphas_;
  double residual_;
};

}  // namespace pacbound

#endif  // PACBOUND_ERROR_H_
