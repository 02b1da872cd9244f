#pragma once

// AVX2+FMA double-precision exp / log / sincos for the vector kernel.
// Classic Cephes rational/polynomial approximations, accurate to a couple of
// ulp over the ranges the integrator uses:
//   exp_pd    : x in [-708.4, 709.4]; outside it clamps to 0 / inf
//               (subnormal results flush to zero)
//   log_pd    : positive normal doubles
//   sincos_pd : |x| <= ~1e8 (Cody-Waite three-term pi/4 reduction; the
//               integrator's phase arguments stay below ~1e3)
// Only include this header from translation units compiled with -mavx2 -mfma.

#include <immintrin.h>

namespace kerrsim {
namespace simd {

inline __m256d splat(double x) { return _mm256_set1_pd(x); }

inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = splat(1.4426950408889634073599);
    const __m256d c1 = splat(6.93145751953125e-1);
    const __m256d c2 = splat(1.42860682030941723212e-6);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, c1, x);
    r = _mm256_fnmadd_pd(n, c2, r);
    const __m256d rr = _mm256_mul_pd(r, r);

    __m256d p = splat(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, rr, splat(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, rr, splat(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = splat(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, rr, splat(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, rr, splat(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, rr, splat(2.00000000000000000005e0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(e, splat(2.0), splat(1.0));

    // scale by 2^n through the exponent bits
    const __m128i ni = _mm256_cvtpd_epi32(n);
    const __m256i nl = _mm256_cvtepi32_epi64(ni);
    const __m256i pw =
        _mm256_slli_epi64(_mm256_add_epi64(nl, _mm256_set1_epi64x(1023)), 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(pw));

    e = _mm256_blendv_pd(e, splat(__builtin_huge_val()),
                         _mm256_cmp_pd(x, splat(709.43), _CMP_GT_OQ));
    e = _mm256_blendv_pd(e, _mm256_setzero_pd(),
                         _mm256_cmp_pd(x, splat(-708.39), _CMP_LT_OQ));
    return e;
}

inline __m256d log_pd(__m256d x) {
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);

    const __m256i xi = _mm256_castpd_si256(x);
    // biased exponent -> e with x = m 2^e, m in [0.5, 1)
    const __m256i ebits = _mm256_srli_epi64(xi, 52);
    const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    const __m128i e32 = _mm256_castsi256_si128(
        _mm256_permutevar8x32_epi32(ebits, idx));
    __m256d e = _mm256_cvtepi32_pd(_mm_sub_epi32(e32, _mm_set1_epi32(1022)));

    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(xi, mant_mask), half_bits));

    // m < sqrt(1/2): use 2m and drop the exponent by one
    const __m256d below = _mm256_cmp_pd(m, splat(0.70710678118654752440), _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(below, splat(1.0)));
    m = _mm256_add_pd(m, _mm256_and_pd(below, m));
    const __m256d z = _mm256_sub_pd(m, splat(1.0));
    const __m256d zz = _mm256_mul_pd(z, z);

    __m256d p = splat(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, z, splat(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, z, splat(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, z, splat(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, z, splat(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, z, splat(7.70838733755885391666e0));

    __m256d q = _mm256_add_pd(z, splat(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, z, splat(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, z, splat(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, z, splat(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, z, splat(2.31251620126765340583e1));

    __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, zz),
                              _mm256_div_pd(p, q));
    y = _mm256_fnmadd_pd(splat(0.5), zz, y);

    __m256d res = _mm256_fmadd_pd(e, splat(-2.121944400546905827679e-4),
                                  _mm256_add_pd(z, y));
    res = _mm256_fmadd_pd(e, splat(0.693359375), res);
    return res;
}

inline void sincos_pd(__m256d x, __m256d* sin_out, __m256d* cos_out) {
    const __m256d sign_mask = splat(-0.0);
    const __m256d sign_x = _mm256_and_pd(x, sign_mask);
    const __m256d ax = _mm256_andnot_pd(sign_mask, x);

    __m256d y = _mm256_floor_pd(
        _mm256_mul_pd(ax, splat(1.27323954473516268615)));  // 4/pi
    __m128i j = _mm256_cvtpd_epi32(y);

    // map odd octant indices up to even ones
    const __m128i odd = _mm_and_si128(j, _mm_set1_epi32(1));
    j = _mm_add_epi32(j, odd);
    y = _mm256_add_pd(y, _mm256_cvtepi32_pd(odd));
    j = _mm_and_si128(j, _mm_set1_epi32(7));

    const __m128i gt3 = _mm_cmpgt_epi32(j, _mm_set1_epi32(3));
    j = _mm_sub_epi32(j, _mm_and_si128(gt3, _mm_set1_epi32(4)));
    const __m128i swap32 = _mm_or_si128(_mm_cmpeq_epi32(j, _mm_set1_epi32(1)),
                                        _mm_cmpeq_epi32(j, _mm_set1_epi32(2)));
    const __m128i cflip32 = _mm_xor_si128(gt3, _mm_cmpgt_epi32(j, _mm_set1_epi32(1)));

    const __m256d swap = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(swap32));
    const __m256d sin_flip = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(gt3));
    const __m256d cos_flip = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(cflip32));

    // Cody-Waite reduction by y * pi/4
    __m256d z = _mm256_fnmadd_pd(y, splat(7.85398125648498535156e-1), ax);
    z = _mm256_fnmadd_pd(y, splat(3.77489470793079817668e-8), z);
    z = _mm256_fnmadd_pd(y, splat(2.69515142907905952645e-15), z);
    const __m256d zz = _mm256_mul_pd(z, z);

    __m256d sp = splat(1.58962301576546568060e-10);
    sp = _mm256_fmadd_pd(sp, zz, splat(-2.50507477628578072866e-8));
    sp = _mm256_fmadd_pd(sp, zz, splat(2.75573136213857245213e-6));
    sp = _mm256_fmadd_pd(sp, zz, splat(-1.98412698295895385996e-4));
    sp = _mm256_fmadd_pd(sp, zz, splat(8.33333333332211858878e-3));
    sp = _mm256_fmadd_pd(sp, zz, splat(-1.66666666666666307295e-1));
    sp = _mm256_fmadd_pd(_mm256_mul_pd(sp, zz), z, z);  // sin(z)

    __m256d cp = splat(-1.13585365213876817300e-11);
    cp = _mm256_fmadd_pd(cp, zz, splat(2.08757008419747316778e-9));
    cp = _mm256_fmadd_pd(cp, zz, splat(-2.75573141792967388112e-7));
    cp = _mm256_fmadd_pd(cp, zz, splat(2.48015872888517179954e-5));
    cp = _mm256_fmadd_pd(cp, zz, splat(-1.38888888888730564116e-3));
    cp = _mm256_fmadd_pd(cp, zz, splat(4.16666666666665929218e-2));
    cp = _mm256_mul_pd(cp, _mm256_mul_pd(zz, zz));
    cp = _mm256_fnmadd_pd(splat(0.5), zz, _mm256_add_pd(cp, splat(1.0)));  // cos(z)

    const __m256d s_abs = _mm256_blendv_pd(sp, cp, swap);
    const __m256d c_abs = _mm256_blendv_pd(cp, sp, swap);

    __m256d s = _mm256_xor_pd(s_abs, _mm256_and_pd(sin_flip, sign_mask));
    s = _mm256_xor_pd(s, sign_x);
    const __m256d c = _mm256_xor_pd(c_abs, _mm256_and_pd(cos_flip, sign_mask));

    *sin_out = s;
    *cos_out = c;
}

} // namespace simd
} // namespace kerrsim
