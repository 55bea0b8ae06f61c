// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rootlets {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be opened, read, or written (including truncated payloads).
class IoError : public Error {
 public:
  using Error::Error;
};

// Byte stream is not a valid NIfTI-1 file (bad magic, bad header fields).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Valid file but a feature we do not decode (datatype, dimensionality).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Caller violated an API contract (grid mismatch, wrong interpolation mode).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but degenerate for the requested computation
// (empty mask, zero variance, no shared levels). CLI maps this to exit 2.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Affine/geometry violation (singular affine, sheared grid, too few slices).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Bad argument value (malformed orientation code, nonpositive radius).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Index outside the volume's slice range.
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace rootlets
