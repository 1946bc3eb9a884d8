#include "harmap/cli.hpp"

int main(int argc, char** argv) { return harmap::cli::run(argc, argv); }
