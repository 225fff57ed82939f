#include "onebit/cli.hpp"

int main(int argc, char** argv) { return onebit::cli_main(argc, argv); }
