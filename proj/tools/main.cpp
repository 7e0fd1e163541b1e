#include "btb/cli.hpp"

int main(int argc, char** argv) { return btb::run_cli(argc, argv); }
