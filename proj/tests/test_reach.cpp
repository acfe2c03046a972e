#include <doctest.h>

TEST_SUITE_BEGIN("reach");
TEST_SUITE_END();
