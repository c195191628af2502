#pragma once

// Thread-local free lists for jet coefficient buffers. Jet arithmetic creates and drops
// short-lived buffers of a few fixed sizes at a very high rate; recycling them per size
// class avoids the general-purpose allocator on the hot path.

#include <cstddef>
#include <memory>
#include <new>
#include <type_traits>

namespace sdw {

namespace pool_detail {

inline constexpr std::size_t kClasses = 20;  // 16 bytes .. 8 MiB

struct FreeBlock {
  FreeBlock* next;
};

struct ThreadPool {
  FreeBlock* heads[kClasses] = {};

  ~ThreadPool() {
    for (auto*& h : heads)
      while (h) {
        FreeBlock* n = h->next;
        ::operator delete(h);
        h = n;
      }
  }
};

inline ThreadPool& local() {
  thread_local ThreadPool pool;
  return pool;
}

/// Smallest class c with 16 << c >= bytes, or kClasses when too large.
inline std::size_t size_class(std::size_t bytes) {
  std::size_t c = 0;
  std::size_t cap = 16;
  while (cap < bytes && c < kClasses) {
    cap <<= 1;
    ++c;
  }
  return c;
}

inline void* allocate(std::size_t bytes) {
  const std::size_t c = size_class(bytes);
  if (c >= kClasses) return ::operator new(bytes);
  FreeBlock*& head = local().heads[c];
  if (head) {
    FreeBlock* b = head;
    head = b->next;
    return b;
  }
  return ::operator new(std::size_t{16} << c);
}

inline void deallocate(void* p, std::size_t bytes) {
  const std::size_t c = size_class(bytes);
  if (c >= kClasses) {
    ::operator delete(p);
    return;
  }
  FreeBlock*& head = local().heads[c];
  auto* b = static_cast<FreeBlock*>(p);
  b->next = head;
  head = b;
}

}  // namespace pool_detail

template <class T>
struct PoolAllocator {
  using value_type = T;

  PoolAllocator() noexcept = default;
  template <class U>
  PoolAllocator(const PoolAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(pool_detail::allocate(n * sizeof(T))); }
  void deallocate(T* p, std::size_t n) noexcept { pool_detail::deallocate(p, n * sizeof(T)); }

  friend bool operator==(const PoolAllocator&, const PoolAllocator&) noexcept { return true; }
};

/// Pooled storage for plain scalars; nested jets keep the standard allocator.
template <class T>
using CoefficientAllocator =
    std::conditional_t<std::is_trivially_copyable_v<T> && alignof(T) <= 16, PoolAllocator<T>, std::allocator<T>>;

}  // namespace sdw
