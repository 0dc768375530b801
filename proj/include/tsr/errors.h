// Copyright 2026 The tsr Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, XML, HTML, detection lines).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed but does not describe a valid table.
class StructureError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Classifier output that cannot be resolved into a consistent structure.
class StructureConflict : public StructureError {
 public:
  StructureConflict(const std::string& what, std::vector<int> cells)
      : StructureError(what), cells_(std::move(cells)) {}
  const std::vector<int>& cells() const { return cells_; }

 private:
  std::vector<int> cells_;
};

// Two cells resolved onto the same grid slot.
class PlacementConflict : public StructureError {
 public:
  PlacementConflict(const std::string& what, int first, int second)
      : StructureError(what), first_(first), second_(second) {}
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  int first_;
  int second_;
};

}  // namespace tsr
