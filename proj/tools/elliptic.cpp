#include "elliptic/cli.hpp"

int main(int argc, char** argv) { return elliptic::cli::run(argc, argv); }
