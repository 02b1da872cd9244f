#include "kerrsim/kernel.hpp"

#include <stdexcept>

namespace kerrsim {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

KernelKind resolve_kernel(KernelKind requested) {
    switch (requested) {
    case KernelKind::automatic:
        return avx2_available() ? KernelKind::avx2 : KernelKind::scalar;
    case KernelKind::avx2:
        if (!avx2_available())
            throw std::runtime_error("avx2 kernel requested but this CPU lacks AVX2/FMA");
        return KernelKind::avx2;
    case KernelKind::scalar:
        return KernelKind::scalar;
    }
    return KernelKind::scalar;
}

StepBlockFn step_block_fn(KernelKind resolved) {
    return resolved == KernelKind::avx2 ? step_block_avx2 : step_block_scalar;
}

std::string kernel_name(KernelKind k) {
    switch (k) {
    case KernelKind::automatic: return "auto";
    case KernelKind::scalar: return "scalar";
    case KernelKind::avx2: return "avx2";
    }
    return "scalar";
}

} // namespace kerrsim
