#include <iostream>

#include "magnonic/cli.hpp"

int main(int argc, char** argv) { return magnonic::cli::run(argc, argv, std::cout, std::cerr); }
