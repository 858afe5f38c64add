#include "edcheck/cli.hpp"

int main(int argc, char** argv) { return edcheck::cli_main(argc, argv); }
