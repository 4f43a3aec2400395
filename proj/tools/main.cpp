#include "commands.hpp"

int main(int argc, char** argv) { return spiralq::cli::run_cli(argc, argv); }
