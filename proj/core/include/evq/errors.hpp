// Copyright 2026 The evq Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVQ_ERRORS_HPP_
#define EVQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace evq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input documents (instance, config, CSV, TNTP).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structural problems while building a network.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// A commodity has no energy-feasible source-sink walk.
class NoFeasibleWalkError : public Error {
 public:
  explicit NoFeasibleWalkError(std::string commodity)
      : Error("no energy-feasible walk for commodity '" + commodity + "'"),
        commodity_(std::move(commodity)) {}
  const std::string& commodity() const { return commodity_; }

 private:
  std::string commodity_;
};

// Invalid walk-flow input or a loading that exceeded its event budget.
class LoadingError : public Error {
 public:
  using Error::Error;
};

}  // namespace evq

#endif  // EVQ_ERRORS_HPP_
