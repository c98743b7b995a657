#include "torusflow/cli.hpp"

int main(int argc, char** argv) { return torusflow::cli_run(argc, argv); }
