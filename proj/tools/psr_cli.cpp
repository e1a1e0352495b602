#include "psr/cli.hpp"

int main(int argc, char** argv) { return psr::cli_main(argc, argv); }
