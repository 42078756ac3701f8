#include "commands.hpp"

int main(int argc, char** argv) { return bellchaos::cli::run(argc, argv); }
