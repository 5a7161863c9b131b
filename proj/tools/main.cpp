#include "cgst/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cgst::cli::dispatch(argc, argv, std::cout, std::cerr); }
