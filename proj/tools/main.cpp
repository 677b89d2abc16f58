#include "polarisim/runner.hpp"

int main(int argc, char** argv) { return polarisim::runner::main_cli(argc, argv); }
