#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>

#include "fraclab/acceptance.hpp"

// Prints one line per acceptance criterion; exits 0 only when all of them pass.
int main(int argc, char** argv) {
  fraclab::AcceptanceOptions opts;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--verbose" || a == "-v") {
      verbose = true;
    } else if (a == "--fault-d-gamma" && i + 1 < argc) {
      opts.d_gamma_scale = std::atof(argv[++i]);
    } else {
      std::cerr << "usage: fraclab_acceptance [--verbose] [--fault-d-gamma SCALE]\n";
      return 2;
    }
  }
  try {
    bool all = true;
    for (int id = 1; id <= 9; ++id) {
      const auto c = fraclab::run_criterion(id, opts);
      std::cout << fraclab::format_criterion_line(c) << std::endl;
      if (verbose || !c.pass) std::cout << fraclab::format_table(c.reports);
      all = all && c.pass;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "fraclab_acceptance: " << e.what() << "\n";
    return 2;
  }
}
