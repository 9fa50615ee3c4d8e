// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string_view>

namespace asim {

using WarningSink = std::function<void(std::string_view)>;

/// Emits a non-fatal diagnostic. Defaults to stderr.
void log_warning(std::string_view message);

/// Replaces the warning sink; returns the previous one. Pass an empty
/// function to restore the stderr default.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace asim
