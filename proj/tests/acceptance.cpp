#include <cstdlib>
#include <iostream>
#include <string>

#include "localtriple/acceptance.hpp"

int main(int argc, char** argv) {
  lt::AcceptanceOptions opts;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--threads" && a + 1 < argc) opts.threads = std::atoi(argv[++a]);
    else if (arg == "--only" && a + 1 < argc) opts.criteria = {std::atoi(argv[++a])};
  }
  bool ok = true;
  for (const auto& r : lt::run_acceptance(opts)) {
    std::cout << lt::format_result(r) << " [" << r.seconds << "s]" << std::endl;
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
