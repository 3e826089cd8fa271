#include "cmorrey/cli.hpp"

int main(int argc, char** argv) { return cmorrey::cli_main(argc, argv); }
