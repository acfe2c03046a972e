#include <doctest.h>

TEST_SUITE_BEGIN("risk");
TEST_SUITE_END();
