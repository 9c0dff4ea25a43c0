#include <string>
#include <vector>

#include "gve/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gve::cli::run(std::move(args));
}
