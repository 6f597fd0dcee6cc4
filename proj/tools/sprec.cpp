#include <iostream>
#include <string>
#include <vector>

#include "sprec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sprec::cli::run_cli(args, std::cout, std::cerr);
}
