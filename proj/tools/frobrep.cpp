#include "frobrep/cli.hpp"

int main(int argc, char** argv) { return frobrep::cli::main_entry(argc, argv); }
