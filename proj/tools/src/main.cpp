#include <iostream>
#include <string>
#include <vector>

#include "posthoc_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return posthoc::cli::run(args, std::cout, std::cerr);
}
