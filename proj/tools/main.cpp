#include "rlra/cli.hpp"

int main(int argc, char** argv) { return rlra::cli_main(argc, argv); }
