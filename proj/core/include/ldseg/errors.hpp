/*
 * Copyright 2026 The ldseg authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
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

namespace ldseg {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A referenced file or artifact does not exist or cannot be opened.
class IoError : public Error {
public:
  using Error::Error;
};

/// A file exists but is not in a supported or well-formed format.
class FormatError : public Error {
public:
  using Error::Error;
};

/// Array or image dimensions disagree with the expected shape.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// An argument violates a documented precondition or value domain.
class ValueError : public Error {
public:
  using Error::Error;
};

/// A configuration document is malformed or contains unknown keys.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A computation produced non-finite values.
class NumericError : public Error {
public:
  using Error::Error;
};

} // namespace ldseg
