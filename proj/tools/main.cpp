#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return lognl::cli::run(argc, argv, std::cout, std::cerr); }
