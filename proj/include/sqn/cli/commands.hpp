#pragma once

#include <string>
#include <vector>

namespace sqn::cli {

/// Entry point for the `sqn` executable; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace sqn::cli
