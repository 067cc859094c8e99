#include <iostream>
#include <string>
#include <vector>

#include "senti/pipeline/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return senti::pipeline::run_cli(args, std::cin, std::cout, std::cerr);
}
