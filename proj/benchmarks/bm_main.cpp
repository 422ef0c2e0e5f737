// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
