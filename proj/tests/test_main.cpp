// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
