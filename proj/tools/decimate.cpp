#include <iostream>

#include <decimate/cli.hpp>

int main(int argc, char** argv) { return decimate::cli::run(argc, argv, std::cout, std::cerr); }
