// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace vanetsim {

/// Runs the invariant oracle suite, printing one [PASS]/[FAIL] line per
/// check. Returns the number of failed checks.
int run_selftest();

}  // namespace vanetsim
