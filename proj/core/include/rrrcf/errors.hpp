/*
 * Copyright 2026 The rrrcf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace rrrcf {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point's dimension does not match the tree/forest it is used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A coordinate is NaN or infinite.
class InvalidPointError : public Error {
 public:
  using Error::Error;
};

// A delete or member query named a point the tree does not hold.
class PointNotFoundError : public Error {
 public:
  using Error::Error;
};

// Configuration values outside their documented ranges.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed dataset or archive input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace rrrcf
