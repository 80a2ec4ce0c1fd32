#include "pascalx/flops.hpp"

namespace pascalx {

namespace {
thread_local FlopCounter* g_counter = nullptr;
}

FlopCounter* active_flop_counter() { return g_counter; }

FlopScope::FlopScope(FlopCounter& counter) : previous_(g_counter) { g_counter = &counter; }

FlopScope::~FlopScope() { g_counter = previous_; }

}  // namespace pascalx
