#include "artqr/cli/pipeline.hpp"

int main(int argc, char** argv) { return artqr::cli::run_cli(argc, argv); }
