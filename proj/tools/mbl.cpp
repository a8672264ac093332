#include "mbl/cli.hpp"

int main(int argc, char** argv) { return mbl::cli_main(argc, argv); }
