#include "depict/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace depict {

int default_workers() {
  if (const char* env = std::getenv("DEPICT_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
      // fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace depict
