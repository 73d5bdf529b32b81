#include <iostream>
#include <string>
#include <vector>

#include "cbm_tools/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cbm::cli_main(args, std::cout, std::cerr);
}
