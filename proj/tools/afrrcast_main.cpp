#include <string>
#include <vector>

#include "afrrcast/cli/pipeline.hpp"

int main(int argc, char** argv) {
  return afrrcast::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
