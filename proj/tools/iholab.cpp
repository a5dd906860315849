#include "iho/experiment.hpp"

int main(int argc, char** argv)
{
    return iho::experiment::main_entry(argc, argv);
}
