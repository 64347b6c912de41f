#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return vincl::cli::main_entry(argc, argv, std::cout, std::cerr); }
