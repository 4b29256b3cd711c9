/**
 * @file test_main.cpp
 * @brief Test runner entry point.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
