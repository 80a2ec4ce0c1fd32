#pragma once

// Optional floating point operation accounting. Disabled (null pointer)
// unless a FlopScope is alive on the current thread, so hot loops only pay
// one branch per kernel sweep, never per element. FFT work is charged with
// the usual 2.5 n log2(n) real-transform model since the transform itself
// is a library call.

#include <cstdint>

namespace pascalx {

struct FlopCounter {
    std::uint64_t adds = 0;
    std::uint64_t muls = 0;

    std::uint64_t total() const { return adds + muls; }
};

FlopCounter* active_flop_counter();

/// RAII: routes flop counts from this thread into `counter`.
class FlopScope {
  public:
    explicit FlopScope(FlopCounter& counter);
    ~FlopScope();
    FlopScope(const FlopScope&) = delete;
    FlopScope& operator=(const FlopScope&) = delete;

  private:
    FlopCounter* previous_;
};

inline void count_flops(std::uint64_t adds, std::uint64_t muls) {
    if (FlopCounter* c = active_flop_counter()) {
        c->adds += adds;
        c->muls += muls;
    }
}

}  // namespace pascalx
