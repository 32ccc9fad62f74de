#include <iostream>
#include <string>
#include <vector>

#include "lqo_cli/run_command.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lqo::cli::run_command(args, std::cout, std::cerr);
}
