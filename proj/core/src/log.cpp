// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/log.hpp"

#include <cstdlib>

namespace toppmpc {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("TOPP_MPC_LOG");
    return env ? std::atoi(env) : 0;
  }();
  return level;
}

}  // namespace toppmpc
