#include "cli.hpp"

int main(int argc, char** argv) { return eit::cli::run(argc, argv); }
