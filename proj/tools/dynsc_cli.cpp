#include <iostream>

#include "dynsc/cli.hpp"

int main(int argc, char** argv) { return dynsc::cli::dispatch(argc, argv, std::cout, std::cerr); }
