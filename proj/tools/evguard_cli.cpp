#include "evguard/cli.hpp"

int main(int argc, char** argv) { return evguard::cli::run(argc, argv); }
