// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iostream>

namespace toppmpc {

/// Verbosity from the TOPP_MPC_LOG environment variable (0 = quiet).
int log_level();

}  // namespace toppmpc

#define TOPPMPC_LOG(level, expr)                             \
  do {                                                       \
    if (::toppmpc::log_level() >= (level)) {                 \
      std::cerr << "[toppmpc] " << expr << std::endl;        \
    }                                                        \
  } while (0)
