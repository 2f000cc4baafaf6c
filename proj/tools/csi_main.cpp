#include <string>
#include <vector>

#include "csi/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return csi::cli_main(args);
}
