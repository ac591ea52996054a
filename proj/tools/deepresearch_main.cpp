#include "deepresearch/cli.hpp"

int main(int argc, char** argv) { return deepresearch::run_cli(argc, argv); }
