#include "difftrail/cli.hpp"

int main(int argc, char** argv) { return difftrail::cli_main(argc, argv); }
