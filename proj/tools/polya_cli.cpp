#include <string>
#include <vector>

#include "polya/cli_runner.hpp"

int main(int argc, char** argv) {
  return polya::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
