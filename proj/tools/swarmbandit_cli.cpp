#include <exception>
#include <iostream>

#include "swarmbandit/experiment.hpp"

int main(int argc, char** argv) {
  swb::CliOptions opts;
  try {
    opts = swb::parse_args(argc, argv);
  } catch (const swb::HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const swb::UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  try {
    return swb::run_experiment(opts.spec, opts.workers, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
