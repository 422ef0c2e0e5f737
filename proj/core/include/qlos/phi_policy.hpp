// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <string>
#include <string_view>

namespace qlos {

/// How the common phase is chosen per frame or per MI evaluation.
///  - fixed:   a single value in radians;
///  - grid:    `grid_size` uniform points 2 pi k / grid_size;
///  - uniform: a fresh uniform draw on [0, 2 pi) per frame.
struct PhiPolicy {
  enum class Kind { fixed, grid, uniform };

  Kind kind = Kind::grid;
  double value = 0.0;
  int grid_size = 256;

  static PhiPolicy fixed(double rad) { return {Kind::fixed, rad, 1}; }
  static PhiPolicy grid(int size = 256) { return {Kind::grid, 0.0, size}; }
  static PhiPolicy uniform() { return {Kind::uniform, 0.0, 0}; }

  /// Accepts "avg" (grid of 256), "grid:<n>", "uniform", "fixed:<rad>".
  /// Throws ConfigError otherwise.
  static PhiPolicy parse(std::string_view text);

  /// Canonical text form accepted by parse().
  std::string describe() const;
};

}  // namespace qlos
