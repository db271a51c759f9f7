#include "hsd/cli.hpp"

int main(int argc, char** argv) { return hsd::cli::main_entry(argc, argv); }
