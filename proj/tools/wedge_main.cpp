#include "wedge/cli.hpp"

int main(int argc, char** argv) { return wedge::run_cli(argc, argv); }
