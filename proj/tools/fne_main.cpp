#include <iostream>

#include "fne/cli.hpp"

int main(int argc, char** argv) { return fne::cli::main_entry(argc, argv, std::cout, std::cerr); }
