#include "commands.hpp"

int main(int argc, char** argv) { return netml::app::run(std::vector<std::string>(argv, argv + argc)); }
