#include "vpd/cli.hpp"

int main(int argc, char** argv) { return vpd::run_cli(argc, argv); }
