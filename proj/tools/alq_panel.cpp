#include "alq/cli/commands.hpp"

int main(int argc, char** argv) { return alq::cli::run(argc, argv); }
