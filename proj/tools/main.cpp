#include <iostream>
#include <string>
#include <vector>

#include "stembranch/cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stembranch::cli::run_command(args, std::cout, std::cerr);
}
