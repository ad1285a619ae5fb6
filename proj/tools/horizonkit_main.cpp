#include "horizonkit/commands.hpp"

int main(int argc, char** argv) { return horizonkit::run_cli(argc, argv); }
