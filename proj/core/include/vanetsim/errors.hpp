// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace vanetsim {

/// A vehicle state that does not lie on the street grid.
struct InvalidStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An aimed link with zero power gain cannot be power-controlled.
struct LinkInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration file or value problem. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Refusal to run a factorial permutation search past the cap. CLI exit code 3.
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vanetsim
