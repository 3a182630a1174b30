#include <iostream>

#include "infomarket/cli.h"

int main(int argc, char** argv) {
  return infomarket::cli::Main(argc, argv, std::cout, std::cerr);
}
