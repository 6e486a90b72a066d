#include <iostream>
#include <string>
#include <vector>

#include "fence/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fence::run_cli(std::move(args), std::cout, std::cerr);
}
