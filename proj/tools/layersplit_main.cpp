#include <string>
#include <vector>

#include "layersplit/cli.hpp"

int main(int argc, char** argv) {
  return layersplit::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
