#include "sqn/cli/commands.hpp"

int main(int argc, char** argv) { return sqn::cli::main_entry(argc, argv); }
