#include <iostream>
#include <string>
#include <vector>

#include "posepipe/cli.hpp"

int main(int argc, char** argv) {
  return posepipe::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
