// Replacement global allocation functions feeding the peak-memory counters.
// Linked as an object library into executables that want allocation-level
// profiling.

#include <malloc.h>

#include <algorithm>
#include <cstdlib>
#include <new>

#include "tsad/workflow/profiling.hpp"

namespace {

[[maybe_unused]] const bool g_registered = (tsad::workflow::alloc::mark_installed(), true);

void* tracked_malloc(std::size_t size) noexcept {
    void* p = std::malloc(size == 0 ? 1 : size);
    if (p != nullptr) tsad::workflow::alloc::record_allocation(malloc_usable_size(p));
    return p;
}

void* tracked_aligned(std::size_t size, std::align_val_t align) noexcept {
    void* p = nullptr;
    const auto alignment = std::max(static_cast<std::size_t>(align), sizeof(void*));
    if (posix_memalign(&p, alignment, size == 0 ? 1 : size) != 0) return nullptr;
    tsad::workflow::alloc::record_allocation(malloc_usable_size(p));
    return p;
}

void tracked_free(void* p) noexcept {
    if (p == nullptr) return;
    tsad::workflow::alloc::record_deallocation(malloc_usable_size(p));
    std::free(p);
}

}  // namespace

void* operator new(std::size_t size) {
    if (void* p = tracked_malloc(size)) return p;
    throw std::bad_alloc();
}
void* operator new[](std::size_t size) {
    if (void* p = tracked_malloc(size)) return p;
    throw std::bad_alloc();
}
void* operator new(std::size_t size, const std::nothrow_t&) noexcept { return tracked_malloc(size); }
void* operator new[](std::size_t size, const std::nothrow_t&) noexcept { return tracked_malloc(size); }
void* operator new(std::size_t size, std::align_val_t align) {
    if (void* p = tracked_aligned(size, align)) return p;
    throw std::bad_alloc();
}
void* operator new[](std::size_t size, std::align_val_t align) {
    if (void* p = tracked_aligned(size, align)) return p;
    throw std::bad_alloc();
}
void* operator new(std::size_t size, std::align_val_t align, const std::nothrow_t&) noexcept {
    return tracked_aligned(size, align);
}
void* operator new[](std::size_t size, std::align_val_t align, const std::nothrow_t&) noexcept {
    return tracked_aligned(size, align);
}

void operator delete(void* p) noexcept { tracked_free(p); }
void operator delete[](void* p) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete(void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
void operator delete(void* p, std::align_val_t, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete[](void* p, std::align_val_t, const std::nothrow_t&) noexcept { tracked_free(p); }
