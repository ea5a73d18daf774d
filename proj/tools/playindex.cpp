#include "playindex/cli.hpp"

int main(int argc, char** argv) { return playindex::cli::run(argc, argv); }
