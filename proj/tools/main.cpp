#include "deltaloop/cli.hpp"

int main(int argc, char** argv) { return deltaloop::cli::run(argc, argv); }
