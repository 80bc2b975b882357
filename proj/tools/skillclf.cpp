#include <string>
#include <vector>

#include "skillclf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return skillclf::cli::run_command(args);
}
