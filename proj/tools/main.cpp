#include "degenheat/runner.hpp"

int main(int argc, char** argv) { return degenheat::main_entry(argc, argv); }
