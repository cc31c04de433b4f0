#include "uot/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace uot {

#ifndef UOT_HAVE_AVX2
const KernelTable *avx2_kernels() { return nullptr; }
#endif

namespace {

const KernelTable &choose() {
  const char *env = std::getenv("UOT_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) {
    return scalar_kernels();
  }
#if defined(UOT_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && avx2_kernels() != nullptr) {
    return *avx2_kernels();
  }
#endif
  return scalar_kernels();
}

} // namespace

const KernelTable &active_kernels() {
  static const KernelTable &table = choose();
  return table;
}

} // namespace uot
