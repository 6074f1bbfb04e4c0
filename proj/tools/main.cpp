#include "splitbound/cli.hpp"

int main(int argc, char** argv) { return splitbound::run_cli(argc, argv); }
