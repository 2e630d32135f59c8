#include <benchmark/benchmark.h>

// libbenchmark_main.a in some distributions carries LTO bytecode that other
// compiler releases cannot link, so the entry point lives here.
BENCHMARK_MAIN();
