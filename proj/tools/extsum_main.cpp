#include "extsum/cli.hpp"

int main(int argc, char** argv) { return extsum::run_cli(argc, argv); }
