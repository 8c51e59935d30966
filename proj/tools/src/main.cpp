#include <iostream>

#include "epkit_cli/cli.hpp"

int main(int argc, char** argv) { return epkit::cli::run(argc, argv, std::cout, std::cerr); }
