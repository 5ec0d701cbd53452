#pragma once

#include <atomic>
#include <iostream>
#include <string>

namespace hbvp {

inline std::atomic<bool>& quiet_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

inline void set_quiet(bool quiet) { quiet_flag() = quiet; }

inline void warn(const std::string& msg) {
  if (!quiet_flag()) std::clog << "hbvp: warning: " << msg << '\n';
}

}  // namespace hbvp
