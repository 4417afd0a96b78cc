#include "chaos/cli.hpp"

int main(int argc, char** argv) { return chaos::cli::run(argc, argv); }
