#include "experiment.hpp"

int main(int argc, char** argv) { return gibbsgeom::cli::main_cli(argc, argv); }
