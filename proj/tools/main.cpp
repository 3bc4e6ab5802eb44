#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  return hft_spectra::cli::run_cli(argc, argv, std::cout, std::cerr);
}
