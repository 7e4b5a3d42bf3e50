#include "qcd_cli.hpp"

int main(int argc, char** argv) { return qcd::cli::run_cli(argc, argv, std::cout, std::cerr); }
