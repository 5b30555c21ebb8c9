#include <iostream>

#include "pem/cli/app.hpp"

int main(int argc, char** argv) { return pem::cli::run_cli(argc, argv, std::cout, std::cerr); }
