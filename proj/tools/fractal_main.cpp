#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return fractal::cli::dispatch(argc, argv, std::cout, std::cerr); }
