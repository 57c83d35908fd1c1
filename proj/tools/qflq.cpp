#include "qflq/run.hpp"

int main(int argc, char** argv) { return qflq::cli_main(argc, argv); }
