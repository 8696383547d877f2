/// @file unit_main.cpp
/// @brief doctest entry point for the unit suites.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
