#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return sosl1::cli::main_entry(argc, argv, std::cout, std::cerr); }
