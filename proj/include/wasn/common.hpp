// wasn/common.hpp
//
// Copyright 2026  The wasn-enhance Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef WASN_COMMON_HPP
#define WASN_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wasn {

using cplx = std::complex<double>;

// Error taxonomy. Each maps to an error kind named by a module contract.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& msg) : Error("shape error: " + msg) {}
};
struct LengthError : Error {
  explicit LengthError(const std::string& msg) : Error("length error: " + msg) {}
};
struct GeometryError : Error {
  explicit GeometryError(const std::string& msg) : Error("geometry error: " + msg) {}
};
struct GenerationError : Error {
  explicit GenerationError(const std::string& msg) : Error("generation error: " + msg) {}
};
struct DegenerateMaskError : Error {
  explicit DegenerateMaskError(const std::string& msg) : Error("degenerate mask: " + msg) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error("numeric error: " + msg) {}
};
struct ProtocolError : Error {
  explicit ProtocolError(const std::string& msg) : Error("protocol error: " + msg) {}
};
struct TrainingError : Error {
  explicit TrainingError(const std::string& msg) : Error("training error: " + msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("io error: " + msg) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

}  // namespace wasn

#endif  // WASN_COMMON_HPP
