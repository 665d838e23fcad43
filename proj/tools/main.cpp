#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return pregols::cli::run(argc, argv, std::cout, std::cerr); }
