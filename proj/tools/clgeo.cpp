#include "clgeo/cli.hpp"

int main(int argc, char** argv) { return clgeo::cli::cli_main(argc, argv); }
