#include "dsrec/cli.hpp"

int main(int argc, char** argv) { return dsrec::run_cli(argc, argv); }
