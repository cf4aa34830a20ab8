#include "tripower/ntt.hpp"

namespace tripower::ntt {

Transformer::Transformer(const Modulus& m) : f_{m.p} {
    const int cnt2 = std::countr_zero(m.p - 1);
    max_log2_ = cnt2;

    // rate2[i] is the twiddle delta applied after finishing block s: the next
    // block's root is rot * rate2[ctz(~s)] (AtCoder-style butterfly layout).
    std::array<u64, 64> root{}, iroot{};
    root[cnt2] = f_.pow(m.g, (m.p - 1) >> cnt2);
    iroot[cnt2] = f_.inv(root[cnt2]);
    for (int i = cnt2 - 1; i >= 0; --i) {
        root[i] = f_.mul(root[i + 1], root[i + 1]);
        iroot[i] = f_.mul(iroot[i + 1], iroot[i + 1]);
    }
    u64 prod = 1, iprod = 1;
    for (int i = 0; i <= cnt2 - 2; ++i) {
        rate2_[i] = f_.mul(root[i + 2], prod);
        irate2_[i] = f_.mul(iroot[i + 2], iprod);
        prod = f_.mul(prod, iroot[i + 2]);
        iprod = f_.mul(iprod, root[i + 2]);
    }
}

void Transformer::forward(std::vector<u64>& a) const {
    const std::size_t n = a.size();
    const int h = std::countr_zero(n);
    for (int ph = 1; ph <= h; ++ph) {
        const std::size_t w = std::size_t(1) << (ph - 1);
        const std::size_t half = std::size_t(1) << (h - ph);
        u64 rot = 1;
        for (std::size_t s = 0; s < w; ++s) {
            const std::size_t offset = s << (h - ph + 1);
            const u64 rot_pre = f_.shoup(rot);
            for (std::size_t i = 0; i < half; ++i) {
                const u64 l = a[i + offset];
                const u64 r = f_.mul_shoup(a[i + offset + half], rot, rot_pre);
                a[i + offset] = f_.add(l, r);
                a[i + offset + half] = f_.sub(l, r);
            }
            if (s + 1 != w) rot = f_.mul(rot, rate2_[std::countr_zero(~s)]);
        }
    }
}

void Transformer::inverse(std::vector<u64>& a) const {
    const std::size_t n = a.size();
    const int h = std::countr_zero(n);
    for (int ph = h; ph >= 1; --ph) {
        const std::size_t w = std::size_t(1) << (ph - 1);
        const std::size_t half = std::size_t(1) << (h - ph);
        u64 irot = 1;
        for (std::size_t s = 0; s < w; ++s) {
            const std::size_t offset = s << (h - ph + 1);
            const u64 irot_pre = f_.shoup(irot);
            for (std::size_t i = 0; i < half; ++i) {
                const u64 l = a[i + offset];
                const u64 r = a[i + offset + half];
                a[i + offset] = f_.add(l, r);
                a[i + offset + half] = f_.mul_shoup(f_.sub(l, r), irot, irot_pre);
            }
            if (s + 1 != w) irot = f_.mul(irot, irate2_[std::countr_zero(~s)]);
        }
    }
    const u64 n_inv = f_.inv(static_cast<u64>(n));
    const u64 n_inv_pre = f_.shoup(n_inv);
    for (auto& x : a) x = f_.mul_shoup(x, n_inv, n_inv_pre);
}

std::vector<u64> Transformer::multiply(std::vector<u64> a, std::vector<u64> b,
                                       std::size_t trunc) const {
    if (a.empty() || b.empty() || trunc == 0) return {};
    const std::size_t full = a.size() + b.size() - 1;
    const std::size_t len = std::bit_ceil(full);
    if (len > kMaxTransform || std::countr_zero(len) > max_log2_)
        throw resource_limit_error("ntt: product length exceeds transform capacity");
    a.resize(len, 0);
    b.resize(len, 0);
    forward(a);
    forward(b);
    for (std::size_t i = 0; i < len; ++i) a[i] = f_.mul(a[i], b[i]);
    inverse(a);
    a.resize(std::min(full, trunc));
    return a;
}

std::vector<u64> Transformer::square(std::vector<u64> a, std::size_t trunc) const {
    if (a.empty() || trunc == 0) return {};
    const std::size_t full = 2 * a.size() - 1;
    const std::size_t len = std::bit_ceil(full);
    if (len > kMaxTransform || std::countr_zero(len) > max_log2_)
        throw resource_limit_error("ntt: product length exceeds transform capacity");
    a.resize(len, 0);
    forward(a);
    for (std::size_t i = 0; i < len; ++i) a[i] = f_.mul(a[i], a[i]);
    inverse(a);
    a.resize(std::min(full, trunc));
    return a;
}

std::vector<mpz_class> crt_signed(const std::vector<std::vector<u64>>& residues) {
    const std::size_t k = residues.size();
    if (k == 0) return {};
    const std::size_t n = residues[0].size();

    std::vector<FieldOps> fields(k);
    for (std::size_t j = 0; j < k; ++j) fields[j] = FieldOps{kModuli[j].p};

    // prefix_mod[j][i] = p_i mod p_j; inv_q[j] = (p_0*...*p_{j-1})^-1 mod p_j
    std::vector<std::vector<u64>> prefix_mod(k);
    std::vector<u64> inv_q(k, 1);
    for (std::size_t j = 1; j < k; ++j) {
        prefix_mod[j].resize(j);
        u64 q = 1;
        for (std::size_t i = 0; i < j; ++i) {
            prefix_mod[j][i] = kModuli[i].p % kModuli[j].p;
            q = fields[j].mul(q, prefix_mod[j][i]);
        }
        inv_q[j] = fields[j].inv(q);
    }

    mpz_class modulus = 1;
    for (std::size_t j = 0; j < k; ++j)
        modulus *= mpz_class(static_cast<unsigned long>(kModuli[j].p));
    const mpz_class half = modulus / 2;

    std::vector<mpz_class> out(n);
    std::vector<u64> digits(k);
    for (std::size_t idx = 0; idx < n; ++idx) {
        digits[0] = residues[0][idx];
        for (std::size_t j = 1; j < k; ++j) {
            // value of the first j digits, reduced mod p_j (Horner, inside out)
            u64 t = digits[j - 1] % kModuli[j].p;
            for (std::size_t i = j - 1; i-- > 0;)
                t = fields[j].add(fields[j].mul(t, prefix_mod[j][i]), digits[i] % kModuli[j].p);
            digits[j] = fields[j].mul(fields[j].sub(residues[j][idx] % kModuli[j].p, t), inv_q[j]);
        }
        mpz_class v(static_cast<unsigned long>(digits[k - 1]));
        for (std::size_t i = k - 1; i-- > 0;) {
            v *= static_cast<unsigned long>(kModuli[i].p);
            v += static_cast<unsigned long>(digits[i]);
        }
        if (v > half) v -= modulus;
        out[idx] = std::move(v);
    }
    return out;
}

}  // namespace tripower::ntt
