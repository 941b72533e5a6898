#include "svpath/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return svpath::cli::run(argc, argv, std::cout, std::cerr); }
