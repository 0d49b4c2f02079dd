#include "cli.hpp"

int main(int argc, char** argv) { return floc::cli::run(argc, argv); }
