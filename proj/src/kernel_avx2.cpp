// AVX2+FMA stepping kernel: four trajectories per vector, mirroring the
// scalar arithmetic in step_core.hpp. This translation unit is compiled with
// -mavx2 -mfma; callers reach it only through the runtime dispatch.

#include "kerrsim/kernel.hpp"
#include "kerrsim/noise.hpp"
#include "kerrsim/simd_math.hpp"
#include "kerrsim/step_core.hpp"

#include <immintrin.h>

namespace kerrsim {

namespace {

using simd::splat;

constexpr double kTol = detail::midpoint_tolerance;
constexpr int kIters = detail::midpoint_iterations;

// Philox4x32-10 for four independent streams; each 64-bit lane of the
// counter/key registers carries one stream's 32-bit word (zero-extended),
// so _mm256_mul_epu32 provides the 32x32->64 mulhilo. Bit-identical to the
// scalar philox4x32.
struct Philox4 {
    __m256i c0, c1, c2, c3;  // counter words per stream
};

inline Philox4 philox4(std::uint64_t seed, const std::uint64_t traj[4],
                       std::uint64_t step) {
    const __m256i mask32 = _mm256_set1_epi64x(0xFFFFFFFFLL);
    const __m256i m0 = _mm256_set1_epi64x(0xD2511F53LL);
    const __m256i m1 = _mm256_set1_epi64x(0xCD9E8D57LL);
    const __m256i w0 = _mm256_set1_epi64x(0x9E3779B9LL);
    const __m256i w1 = _mm256_set1_epi64x(0xBB67AE85LL);

    Philox4 p;
    p.c0 = _mm256_set1_epi64x(static_cast<long long>(step & 0xFFFFFFFFu));
    p.c1 = _mm256_set1_epi64x(static_cast<long long>(step >> 32));
    p.c2 = _mm256_setr_epi64x(static_cast<long long>(traj[0] & 0xFFFFFFFFu),
                              static_cast<long long>(traj[1] & 0xFFFFFFFFu),
                              static_cast<long long>(traj[2] & 0xFFFFFFFFu),
                              static_cast<long long>(traj[3] & 0xFFFFFFFFu));
    p.c3 = _mm256_setr_epi64x(static_cast<long long>(traj[0] >> 32),
                              static_cast<long long>(traj[1] >> 32),
                              static_cast<long long>(traj[2] >> 32),
                              static_cast<long long>(traj[3] >> 32));
    __m256i k0 = _mm256_set1_epi64x(static_cast<long long>(seed & 0xFFFFFFFFu));
    __m256i k1 = _mm256_set1_epi64x(static_cast<long long>(seed >> 32));

    for (int r = 0; r < 10; ++r) {
        const __m256i p0 = _mm256_mul_epu32(m0, p.c0);
        const __m256i p1 = _mm256_mul_epu32(m1, p.c2);
        const __m256i hi0 = _mm256_srli_epi64(p0, 32);
        const __m256i lo0 = _mm256_and_si256(p0, mask32);
        const __m256i hi1 = _mm256_srli_epi64(p1, 32);
        const __m256i lo1 = _mm256_and_si256(p1, mask32);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, p.c1), k0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, p.c3), k1);
        p.c0 = n0;
        p.c1 = lo1;
        p.c2 = n2;
        p.c3 = lo0;
        k0 = _mm256_and_si256(_mm256_add_epi64(k0, w0), mask32);
        k1 = _mm256_and_si256(_mm256_add_epi64(k1, w1), mask32);
    }
    return p;
}

// exact u64 (< 2^52) -> double
inline __m256d u52_to_pd(__m256i x) {
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(x, magic)),
                         splat(4503599627370496.0));
}

// two unit Gaussians per stream, matching gaussian_pair up to the ulp
// differences of the vector log/sincos
inline void gaussians4(std::uint64_t seed, const std::uint64_t traj[4],
                       std::uint64_t step, __m256d* xi1, __m256d* xi2) {
    const Philox4 p = philox4(seed, traj, step);
    const __m256i x0 = _mm256_or_si256(_mm256_slli_epi64(p.c1, 32), p.c0);
    const __m256i x1 = _mm256_or_si256(_mm256_slli_epi64(p.c3, 32), p.c2);
    const __m256d u0 =
        _mm256_mul_pd(u52_to_pd(_mm256_srli_epi64(x0, 12)), splat(0x1p-52));
    const __m256d u1 =
        _mm256_mul_pd(u52_to_pd(_mm256_srli_epi64(x1, 12)), splat(0x1p-52));

    const __m256d radius = _mm256_sqrt_pd(_mm256_mul_pd(
        splat(-2.0), simd::log_pd(_mm256_sub_pd(splat(1.0), u0))));
    __m256d sa, ca;
    simd::sincos_pd(_mm256_mul_pd(splat(two_pi), u1), &sa, &ca);
    *xi1 = _mm256_mul_pd(radius, ca);
    *xi2 = _mm256_mul_pd(radius, sa);
}

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(splat(-0.0), x); }

inline __m256d vmax(__m256d a, __m256d b) { return _mm256_max_pd(a, b); }

} // namespace

void step_block_avx2(PhasePoint* points, std::uint64_t first_traj,
                     std::size_t count, std::int64_t step_begin,
                     std::int64_t step_end, const StepContext& ctx) {
    // groups of four aligned to the absolute trajectory index; ragged tail
    // goes through the scalar reference
    std::size_t head = count & ~static_cast<std::size_t>(3);

    const detail::StepCore core = detail::make_step_core(ctx.dt, ctx.kappa, ctx.nsub);
    const bool constant_gauge = ctx.gauge.mode == GaugeMode::constant;

    const __m256d v_dt = splat(core.dt);
    const __m256d v_sqrt_dt = splat(core.sqrt_dt);
    const __m256d v_rr = splat(core.rr);
    const __m256d v_ri = splat(core.ri);
    const __m256d v_s = splat(core.s);
    const __m256d v_nsub = splat(core.nsub);
    const __m256d v_kappa = splat(core.kappa);
    const __m256d v_hk = splat(core.half_kappa);
    const __m256d v_hak = splat(core.half_abs_kappa);
    const __m256d half = splat(0.5);

    // fixed gauge terms for the constant mode
    detail::GaugeTerms fixed;
    if (constant_gauge) fixed = detail::make_gauge_terms(ctx.gauge.g0);
    const __m256d f_ch = splat(fixed.ch), f_sh = splat(fixed.sh);
    const __m256d f_eg = splat(fixed.eg), f_e2g = splat(fixed.e2g);

    // adaptive gauge constants
    const double eight_pi = 4.0 * two_pi;
    const __m256d g_pref =
        splat(ctx.gauge.n_bar > 0.0 ? eight_pi / std::sqrt(ctx.gauge.n_bar) : 0.0);
    const __m256d g_2tr = splat(2.0 * ctx.gauge.tau_r);

    for (std::size_t i0 = 0; i0 < head; i0 += 4) {
        PhasePoint* p = points + i0;
        const std::uint64_t traj[4] = {first_traj + i0, first_traj + i0 + 1,
                                       first_traj + i0 + 2, first_traj + i0 + 3};

        // AoS -> SoA
        __m256d ar = _mm256_setr_pd(p[0].log_alpha.real(), p[1].log_alpha.real(),
                                    p[2].log_alpha.real(), p[3].log_alpha.real());
        __m256d ai = _mm256_setr_pd(p[0].log_alpha.imag(), p[1].log_alpha.imag(),
                                    p[2].log_alpha.imag(), p[3].log_alpha.imag());
        __m256d br = _mm256_setr_pd(p[0].log_beta.real(), p[1].log_beta.real(),
                                    p[2].log_beta.real(), p[3].log_beta.real());
        __m256d bi = _mm256_setr_pd(p[0].log_beta.imag(), p[1].log_beta.imag(),
                                    p[2].log_beta.imag(), p[3].log_beta.imag());
        __m256d wr = _mm256_setr_pd(p[0].log_omega.real(), p[1].log_omega.real(),
                                    p[2].log_omega.real(), p[3].log_omega.real());
        __m256d wi = _mm256_setr_pd(p[0].log_omega.imag(), p[1].log_omega.imag(),
                                    p[2].log_omega.imag(), p[3].log_omega.imag());
        __m256d alive =
            _mm256_castsi256_pd(_mm256_setr_epi64x(p[0].diverged ? 0 : -1,
                                                   p[1].diverged ? 0 : -1,
                                                   p[2].diverged ? 0 : -1,
                                                   p[3].diverged ? 0 : -1));
        if (_mm256_movemask_pd(alive) == 0) continue;

        for (std::int64_t s = step_begin; s < step_end; ++s) {
            if (_mm256_movemask_pd(alive) == 0) break;

            __m256d xi1, xi2;
            gaussians4(ctx.seed, traj, static_cast<std::uint64_t>(s), &xi1, &xi2);
            const __m256d dW1 = _mm256_mul_pd(xi1, v_sqrt_dt);
            const __m256d dW2 = _mm256_mul_pd(xi2, v_sqrt_dt);

            __m256d ch = f_ch, sh = f_sh, eg = f_eg, e2g = f_e2g;
            if (!constant_gauge) {
                // pre-step n for the non-anticipative gauge
                const __m256d en0 = simd::exp_pd(_mm256_add_pd(ar, br));
                __m256d s0, c0;
                simd::sincos_pd(_mm256_add_pd(ai, bi), &s0, &c0);
                const __m256d nx0 = _mm256_mul_pd(en0, c0);
                const __m256d ny0 = _mm256_mul_pd(en0, s0);
                const __m256d tau = splat(static_cast<double>(s) * ctx.dt_tau);
                const __m256d n2 = _mm256_fmadd_pd(nx0, nx0, _mm256_mul_pd(ny0, ny0));
                const __m256d t =
                    _mm256_fmadd_pd(splat(4.0), _mm256_mul_pd(ny0, ny0), splat(1.0));
                const __m256d arg = _mm256_fmadd_pd(
                    _mm256_mul_pd(g_pref, n2), _mm256_sub_pd(g_2tr, tau),
                    _mm256_mul_pd(t, _mm256_sqrt_pd(t)));
                const __m256d g =
                    _mm256_mul_pd(simd::log_pd(arg), splat(0.16666666666666666667));
                const __m256d epos = simd::exp_pd(g);
                eg = simd::exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), g));
                ch = _mm256_mul_pd(half, _mm256_add_pd(epos, eg));
                sh = _mm256_mul_pd(half, _mm256_sub_pd(epos, eg));
                e2g = _mm256_mul_pd(eg, eg);
            }

            // noise increments (state independent within the step)
            const __m256d u1 = _mm256_mul_pd(ch, dW1);
            const __m256d v1 = _mm256_mul_pd(_mm256_mul_pd(v_s, sh), dW2);
            const __m256d na_re = _mm256_sub_pd(
                _mm256_setzero_pd(),
                _mm256_fmadd_pd(v_rr, v1, _mm256_mul_pd(v_ri, u1)));
            const __m256d na_im = _mm256_fmsub_pd(v_rr, u1, _mm256_mul_pd(v_ri, v1));

            const __m256d u2 = _mm256_mul_pd(ch, dW2);
            const __m256d v2 = _mm256_sub_pd(
                _mm256_setzero_pd(), _mm256_mul_pd(_mm256_mul_pd(v_s, sh), dW1));
            const __m256d nb_re = _mm256_fmsub_pd(v_ri, u2, _mm256_mul_pd(v_rr, v2));
            const __m256d nb_im = _mm256_fmadd_pd(v_rr, u2, _mm256_mul_pd(v_ri, v2));

            const __m256d w2 = _mm256_sub_pd(_mm256_setzero_pd(),
                                             _mm256_mul_pd(v_s, dW2));
            const __m256d meg = _mm256_sub_pd(_mm256_setzero_pd(), eg);
            const __m256d nw_re =
                _mm256_mul_pd(meg, _mm256_fmsub_pd(v_rr, dW1, _mm256_mul_pd(v_ri, w2)));
            const __m256d nw_im =
                _mm256_mul_pd(meg, _mm256_fmadd_pd(v_rr, w2, _mm256_mul_pd(v_ri, dW1)));

            const __m256d dwdrift = _mm256_mul_pd(v_hak, e2g);

            __m256d mar = ar, mai = ai, mbr = br, mbi = bi, mwr = wr, mwi = wi;
            __m256d delta = _mm256_setzero_pd();

            for (int it = 0; it < kIters; ++it) {
                const __m256d en = simd::exp_pd(_mm256_add_pd(mar, mbr));
                __m256d sphi, cphi;
                simd::sincos_pd(_mm256_add_pd(mai, mbi), &sphi, &cphi);
                const __m256d nx = _mm256_mul_pd(en, cphi);
                const __m256d ny = _mm256_mul_pd(en, sphi);

                const __m256d aa_im = _mm256_fnmadd_pd(
                    v_kappa, _mm256_sub_pd(nx, v_nsub), v_hk);
                const __m256d ab_im = _mm256_sub_pd(_mm256_setzero_pd(), aa_im);
                const __m256d dw_re = _mm256_mul_pd(dwdrift, nx);
                const __m256d dw_im =
                    _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(dwdrift, ny));

                const __m256d nar = _mm256_fmadd_pd(half, na_re, ar);
                const __m256d nai = _mm256_fmadd_pd(
                    half, _mm256_fmadd_pd(aa_im, v_dt, na_im), ai);
                const __m256d nbr = _mm256_fmadd_pd(half, nb_re, br);
                const __m256d nbi = _mm256_fmadd_pd(
                    half, _mm256_fmadd_pd(ab_im, v_dt, nb_im), bi);
                const __m256d nwr = _mm256_fmadd_pd(
                    half, _mm256_fmadd_pd(dw_re, v_dt, _mm256_mul_pd(nw_re, ny)), wr);
                const __m256d nwi = _mm256_fmadd_pd(
                    half, _mm256_fmadd_pd(dw_im, v_dt, _mm256_mul_pd(nw_im, ny)), wi);

                if (it == kIters - 1) {
                    delta = vabs(_mm256_sub_pd(nar, mar));
                    delta = vmax(delta, vabs(_mm256_sub_pd(nai, mai)));
                    delta = vmax(delta, vabs(_mm256_sub_pd(nbr, mbr)));
                    delta = vmax(delta, vabs(_mm256_sub_pd(nbi, mbi)));
                    delta = vmax(delta, vabs(_mm256_sub_pd(nwr, mwr)));
                    delta = vmax(delta, vabs(_mm256_sub_pd(nwi, mwi)));
                }
                mar = nar; mai = nai; mbr = nbr; mbi = nbi; mwr = nwr; mwi = nwi;
            }

            __m256d scale = vabs(mar);
            scale = vmax(scale, vabs(mai));
            scale = vmax(scale, vabs(mbr));
            scale = vmax(scale, vabs(mbi));
            scale = vmax(scale, vabs(mwr));
            scale = vmax(scale, vabs(mwi));
            const __m256d converged = _mm256_cmp_pd(
                delta,
                _mm256_mul_pd(splat(kTol), _mm256_add_pd(splat(1.0), scale)),
                _CMP_LE_OQ);

            const __m256d two = splat(2.0);
            const __m256d oar = _mm256_fmsub_pd(two, mar, ar);
            const __m256d oai = _mm256_fmsub_pd(two, mai, ai);
            const __m256d obr = _mm256_fmsub_pd(two, mbr, br);
            const __m256d obi = _mm256_fmsub_pd(two, mbi, bi);
            const __m256d owr = _mm256_fmsub_pd(two, mwr, wr);
            const __m256d owi = _mm256_fmsub_pd(two, mwi, wi);

            // healthy = converged, finite, and |Re log| within the window
            const __m256d bound = splat(divergence_log_bound);
            __m256d ok = converged;
            ok = _mm256_and_pd(ok, _mm256_cmp_pd(vabs(oar), bound, _CMP_LE_OQ));
            ok = _mm256_and_pd(ok, _mm256_cmp_pd(vabs(obr), bound, _CMP_LE_OQ));
            ok = _mm256_and_pd(ok, _mm256_cmp_pd(vabs(owr), bound, _CMP_LE_OQ));
            // the OQ compares are false on NaN; catch non-finite imag too
            ok = _mm256_and_pd(ok, _mm256_cmp_pd(vabs(oai), splat(1e308), _CMP_LE_OQ));
            ok = _mm256_and_pd(ok, _mm256_cmp_pd(vabs(obi), splat(1e308), _CMP_LE_OQ));
            ok = _mm256_and_pd(ok, _mm256_cmp_pd(vabs(owi), splat(1e308), _CMP_LE_OQ));

            const __m256d advance = _mm256_and_pd(alive, ok);
            ar = _mm256_blendv_pd(ar, oar, advance);
            ai = _mm256_blendv_pd(ai, oai, advance);
            br = _mm256_blendv_pd(br, obr, advance);
            bi = _mm256_blendv_pd(bi, obi, advance);
            wr = _mm256_blendv_pd(wr, owr, advance);
            wi = _mm256_blendv_pd(wi, owi, advance);
            alive = advance;
        }

        // SoA -> AoS
        alignas(32) double b_ar[4], b_ai[4], b_br[4], b_bi[4], b_wr[4], b_wi[4];
        _mm256_store_pd(b_ar, ar);
        _mm256_store_pd(b_ai, ai);
        _mm256_store_pd(b_br, br);
        _mm256_store_pd(b_bi, bi);
        _mm256_store_pd(b_wr, wr);
        _mm256_store_pd(b_wi, wi);
        const int alive_mask = _mm256_movemask_pd(alive);
        for (int l = 0; l < 4; ++l) {
            p[l].log_alpha = cplx(b_ar[l], b_ai[l]);
            p[l].log_beta = cplx(b_br[l], b_bi[l]);
            p[l].log_omega = cplx(b_wr[l], b_wi[l]);
            p[l].diverged = ((alive_mask >> l) & 1) == 0;
        }
    }

    if (head < count)
        step_block_scalar(points + head, first_traj + head, count - head,
                          step_begin, step_end, ctx);
}

namespace testing_hooks {

void avx2_uniform_pairs(std::uint64_t seed, const std::uint64_t traj[4],
                        std::uint64_t step, double u0[4], double u1[4]) {
    const Philox4 p = philox4(seed, traj, step);
    const __m256i x0 = _mm256_or_si256(_mm256_slli_epi64(p.c1, 32), p.c0);
    const __m256i x1 = _mm256_or_si256(_mm256_slli_epi64(p.c3, 32), p.c2);
    _mm256_storeu_pd(u0, _mm256_mul_pd(u52_to_pd(_mm256_srli_epi64(x0, 12)),
                                       splat(0x1p-52)));
    _mm256_storeu_pd(u1, _mm256_mul_pd(u52_to_pd(_mm256_srli_epi64(x1, 12)),
                                       splat(0x1p-52)));
}

void avx2_gaussian_pairs(std::uint64_t seed, const std::uint64_t traj[4],
                         std::uint64_t step, double xi1[4], double xi2[4]) {
    __m256d a, b;
    gaussians4(seed, traj, step, &a, &b);
    _mm256_storeu_pd(xi1, a);
    _mm256_storeu_pd(xi2, b);
}

void avx2_exp(const double in[4], double out[4]) {
    _mm256_storeu_pd(out, simd::exp_pd(_mm256_loadu_pd(in)));
}

void avx2_log(const double in[4], double out[4]) {
    _mm256_storeu_pd(out, simd::log_pd(_mm256_loadu_pd(in)));
}

void avx2_sincos(const double in[4], double s[4], double c[4]) {
    __m256d vs, vc;
    simd::sincos_pd(_mm256_loadu_pd(in), &vs, &vc);
    _mm256_storeu_pd(s, vs);
    _mm256_storeu_pd(c, vc);
}

} // namespace testing_hooks

} // namespace kerrsim
