#include <vector>

#include "tvq1/cli.hpp"

int main(int argc, char** argv) {
  return tvq1::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
