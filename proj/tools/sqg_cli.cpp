#include "sqg/cli.hpp"

int main(int argc, char** argv) { return sqg::cli_main(argc, argv); }
