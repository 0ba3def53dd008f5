#include "solitonforge/cli.hpp"

int main(int argc, char** argv) {
  return solitonforge::cli::run(argc, argv);
}
