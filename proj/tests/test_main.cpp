#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>

int main(int argc, char** argv) {
  // Keep BLAS single-threaded so decompositions are reproducible run to run;
  // our own parallelism is deterministic by construction.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  return doctest::Context(argc, argv).run();
}
