#include "heatasym/cli.hpp"

int main(int argc, char** argv) { return heatasym::cli::main_entry(argc, argv); }
