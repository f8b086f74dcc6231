#include "mmheat/cli.hpp"

int main(int argc, char** argv) { return mmheat::cli::main_entry(argc, argv); }
