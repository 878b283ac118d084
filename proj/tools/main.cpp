#include "ebcc/cli.hpp"

int main(int argc, char** argv) { return ebcc::cli_main(argc, argv); }
