// kernels/kernels_dispatch.cpp
//
// Copyright 2026  The wasn-enhance Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "wasn/common.hpp"
#include "wasn/kernels.hpp"

namespace wasn::kern {
namespace {

const Ops* pick_default() {
  const char* env = std::getenv("WASN_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) return &detail::scalar_ops;
#if defined(__x86_64__) || defined(__i386__)
  if (env && std::strcmp(env, "avx2") == 0) {
    if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")))
      throw Error("WASN_KERNELS=avx2 requested but cpu lacks avx2/fma");
    return &detail::avx2_ops;
  }
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &detail::avx2_ops;
#endif
  return &detail::scalar_ops;
}

std::atomic<const Ops*> g_ops{nullptr};

const Ops* current() {
  const Ops* p = g_ops.load(std::memory_order_acquire);
  if (!p) {
    p = pick_default();
    g_ops.store(p, std::memory_order_release);
  }
  return p;
}

}  // namespace

const Ops& ops() { return *current(); }

const char* backend_name() { return current()->name; }

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void set_backend(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_ops.store(&detail::scalar_ops, std::memory_order_release);
  } else if (std::strcmp(name, "avx2") == 0) {
    if (!avx2_available()) throw Error("avx2 backend unavailable on this cpu");
    g_ops.store(&detail::avx2_ops, std::memory_order_release);
  } else if (std::strcmp(name, "auto") == 0) {
    g_ops.store(avx2_available() ? &detail::avx2_ops : &detail::scalar_ops,
                std::memory_order_release);
  } else {
    throw Error(std::string("unknown kernel backend: ") + name);
  }
}

}  // namespace wasn::kern
