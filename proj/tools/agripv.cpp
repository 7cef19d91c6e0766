#include "agripv/commands.hpp"

int main(int argc, char** argv) { return agripv::run_cli(argc, argv); }
