#include <iostream>

#include "join2pn/cli.hpp"

int main(int argc, char** argv) {
  return join2pn::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
