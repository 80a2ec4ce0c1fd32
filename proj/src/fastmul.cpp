#include "pascalx/fastmul.hpp"

#include <stdexcept>
#include <unordered_map>

#include "pascalx/conv.hpp"
#include "pascalx/quadratic.hpp"

namespace pascalx {
namespace {

// Per-thread scratch shared by every recursion on this thread: conv
// buffers, cached kernels per order, and the accumulation buffers used by
// transpose/k-way assembly. Nothing here outlives or leaks across calls
// semantically; it only avoids reallocation in timing loops.
struct Workspace {
    ConvWorkspace conv;
    std::unordered_map<std::uint64_t, ConvKernel> kernels;
    std::vector<double> scratch;  // transpose accumulation, >= n at top level
    std::vector<double> kway;     // k-way transpose accumulator

    const ConvKernel& kernel(Family family, std::size_t m) {
        const std::uint64_t key = (family == Family::Q ? 0ull : 1ull) << 32 |
                                  static_cast<std::uint64_t>(m);
        auto it = kernels.find(key);
        if (it == kernels.end()) {
            KernelKind kind = family == Family::Q ? KernelKind::BinomialNormalized
                                                  : KernelKind::BinomialUnnormalized;
            it = kernels.emplace(key, make_kernel(kind, static_cast<int>(m))).first;
        }
        return it->second;
    }
};

Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
}

void rec_identity(Family family, const RecursionPlan& plan, std::span<double> x, Workspace& ws) {
    const std::size_t n = x.size();
    if (n <= plan.threshold || n < 2) {
        apply_quadratic({family, Variant::Identity, n}, Strategy::DirectMultiply, x);
        return;
    }
    const std::size_t m = plan.split(n);
    conv_valid(ws.kernel(family, m), x, x.subspan(m), ConvPath::Fft, ws.conv);
    rec_identity(family, plan, x.subspan(m), ws);
    rec_identity(family, plan, x.first(m), ws);
}

// x <- M^T x. Children run first; the parent then folds the recursed tail
// through the full convolution and accumulates. `scratch` is the shared
// top-level buffer (children are done with it by the time it is written).
void rec_transpose(Family family, const RecursionPlan& plan, std::span<double> x,
                   std::span<double> scratch, Workspace& ws) {
    const std::size_t n = x.size();
    if (n <= plan.threshold || n < 2) {
        apply_quadratic({family, Variant::Transpose, n}, Strategy::DirectMultiply, x);
        return;
    }
    const std::size_t m = plan.split(n);
    rec_transpose(family, plan, x.subspan(m), scratch, ws);
    rec_transpose(family, plan, x.first(m), scratch, ws);
    auto v = scratch.first(n);
    conv_full_transpose(ws.kernel(family, m), x.subspan(m), v, ConvPath::Fft, ws.conv);
    for (std::size_t i = 0; i < m; ++i) x[i] += v[i];
    for (std::size_t i = m; i < n; ++i) x[i] = v[i];
}

void apply_identity_or_transpose(Family family, Variant variant, const RecursionPlan& plan,
                                 std::span<double> x, Workspace& ws) {
    if (variant == Variant::Identity) {
        rec_identity(family, plan, x, ws);
    } else {
        ws.scratch.resize(x.size());
        rec_transpose(family, plan, x, ws.scratch, ws);
    }
}

// First k-way level for identity: block i is Q_{n_i} B_{c_i, c_{i-1}}
// applied to the length-c_i prefix. Blocks run back to front so each
// conv still sees its untouched prefix.
void kway_identity(Family family, const Partition& part, const RecursionPlan& plan,
                   std::span<double> x, Workspace& ws) {
    const std::size_t k = part.parts.size();
    for (std::size_t i = k; i-- > 0;) {
        const std::size_t lo = part.prefixes[i];
        const std::size_t hi = part.prefixes[i + 1];
        auto block = x.subspan(lo, hi - lo);
        if (lo > 0)
            conv_valid(ws.kernel(family, lo), x.first(hi), block, ConvPath::Fft, ws.conv);
        rec_identity(family, plan, block, ws);
    }
}

// Transposed first level: accumulate B^T_{c_i, c_{i-1}} (M^T block_i) over
// the length-c_i prefixes.
void kway_transpose(Family family, const Partition& part, const RecursionPlan& plan,
                    std::span<double> x, Workspace& ws) {
    const std::size_t n = x.size();
    const std::size_t k = part.parts.size();
    ws.scratch.resize(n);
    ws.kway.assign(n, 0.0);
    auto acc = std::span<double>(ws.kway);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t lo = part.prefixes[i];
        const std::size_t hi = part.prefixes[i + 1];
        auto block = x.subspan(lo, hi - lo);
        rec_transpose(family, plan, block, ws.scratch, ws);
        if (lo == 0) {
            for (std::size_t j = 0; j < hi; ++j) acc[j] += block[j];
        } else {
            auto v = std::span<double>(ws.scratch).first(hi);
            conv_full_transpose(ws.kernel(family, lo), block, v, ConvPath::Fft, ws.conv);
            for (std::size_t j = 0; j < hi; ++j) acc[j] += v[j];
        }
    }
    std::copy(acc.begin(), acc.end(), x.begin());
}

// Rewrites an inverse-variant request as sign/diagonal wrappers around an
// identity/transpose product with P, then runs `inner`.
template <class Inner>
void dispatch(const MatrixSpec& spec, std::span<double> x, Inner&& inner) {
    switch (spec.variant) {
        case Variant::Identity:
        case Variant::Transpose:
            inner(spec.family, spec.variant);
            return;
        case Variant::Inverse:
            apply_sign(x);
            if (spec.family == Family::Q) apply_diagonal(2.0, x);  // Q^-1 = W P D^(2) W
            inner(Family::P, Variant::Identity);
            apply_sign(x);
            return;
        case Variant::InverseTranspose:
            apply_sign(x);
            inner(Family::P, Variant::Transpose);  // Q^-T = W D^(2) P^T W
            if (spec.family == Family::Q) apply_diagonal(2.0, x);
            apply_sign(x);
            return;
    }
}

}  // namespace

void RecursionPlan::validate() const {
    if (threshold < 1) throw std::invalid_argument("RecursionPlan: threshold must be >= 1");
    if (branch < 2) throw std::invalid_argument("RecursionPlan: branching factor must be >= 2");
    for (std::size_t n = 0; n < splits.size(); ++n)
        if (splits[n] != 0 && (splits[n] >= n || n < 2))
            throw std::invalid_argument("RecursionPlan: split table entry out of range");
}

Partition partition_uniform(std::size_t n, std::size_t k) {
    if (k < 1 || k > n) throw std::invalid_argument("partition_uniform: need 1 <= k <= n");
    Partition p;
    p.parts.resize(k);
    p.prefixes.resize(k + 1);
    const std::size_t q = n / k, r = n % k;
    p.prefixes[0] = 0;
    for (std::size_t i = 0; i < k; ++i) {
        p.parts[i] = q + (i < r ? 1 : 0);
        p.prefixes[i + 1] = p.prefixes[i] + p.parts[i];
    }
    return p;
}

void recursive_apply(const MatrixSpec& spec, const RecursionPlan& plan, std::span<double> x) {
    if (x.size() != spec.n) throw std::invalid_argument("recursive_apply: dimension mismatch");
    plan.validate();
    Workspace& ws = workspace();
    dispatch(spec, x, [&](Family family, Variant variant) {
        apply_identity_or_transpose(family, variant, plan, x, ws);
    });
}

void kway_apply(const MatrixSpec& spec, std::size_t k, const RecursionPlan& plan,
                std::span<double> x) {
    if (x.size() != spec.n) throw std::invalid_argument("kway_apply: dimension mismatch");
    if (k < 2 || k > spec.n) throw std::invalid_argument("kway_apply: need 2 <= k <= n");
    plan.validate();
    if (k == 2) {
        recursive_apply(spec, plan, x);
        return;
    }
    Workspace& ws = workspace();
    const Partition part = partition_uniform(spec.n, k);
    dispatch(spec, x, [&](Family family, Variant variant) {
        if (variant == Variant::Identity)
            kway_identity(family, part, plan, x, ws);
        else
            kway_transpose(family, part, plan, x, ws);
    });
}

}  // namespace pascalx
