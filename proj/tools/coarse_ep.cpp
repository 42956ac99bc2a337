#include "cli.hpp"

int main(int argc, char** argv) { return coarse_ep::cli::run(argc, argv); }
