#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clgeo {

/// Element of GF(q), q = p^h. The encoding is the integer
/// sum c_i * p^i for the polynomial residue sum c_i * alpha^i,
/// so encodings are in [0, q) and the map is bijective.
struct Fe {
    std::uint16_t v = 0;
    constexpr Fe() = default;
    constexpr explicit Fe(unsigned value) : v(static_cast<std::uint16_t>(value)) {}
    friend constexpr auto operator<=>(const Fe&, const Fe&) = default;
};

namespace detail {

struct ModulusEntry {
    int p;
    int h;
    std::array<int, 9> coeffs;  // constant term first, degree h has coefficient 1
};

// Built-in irreducible moduli for the supported extension fields.
// Prime fields use the degree-1 modulus x (coefficients [0, 1]).
// Every entry is verified irreducible by the test suite.
inline constexpr ModulusEntry kModuli[] = {
    {2, 2, {1, 1, 1}},                    // x^2 + x + 1
    {2, 3, {1, 1, 0, 1}},                 // x^3 + x + 1
    {2, 4, {1, 1, 0, 0, 1}},              // x^4 + x + 1
    {2, 5, {1, 0, 1, 0, 0, 1}},           // x^5 + x^2 + 1
    {2, 6, {1, 1, 0, 0, 0, 0, 1}},        // x^6 + x + 1
    {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},     // x^7 + x + 1
    {2, 8, {1, 1, 0, 1, 1, 0, 0, 0, 1}},  // x^8 + x^4 + x^3 + x + 1
    {3, 2, {1, 0, 1}},                    // x^2 + 1
    {3, 3, {1, 2, 0, 1}},                 // x^3 + 2x + 1
    {3, 4, {2, 0, 0, 2, 1}},              // x^4 + 2x^3 + 2
    {3, 5, {1, 2, 0, 0, 0, 1}},           // x^5 + 2x + 1
    {5, 2, {1, 1, 1}},                    // x^2 + x + 1
    {5, 3, {1, 1, 0, 1}},                 // x^3 + x + 1
    {7, 2, {1, 0, 1}},                    // x^2 + 1
    {11, 2, {1, 0, 1}},                   // x^2 + 1
    {13, 2, {2, 0, 1}},                   // x^2 + 2
};

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

/// Arithmetic context for GF(q), q = p^h <= 2^16. Immutable after
/// construction; all operations are pure.
///
/// Supported orders: every prime p (h = 1), plus the extension fields
/// with a built-in modulus (p^h in {4,8,9,16,25,27,32,49,64,81,121,
/// 125,128,169,243,256}).
class Gf {
public:
    Gf(int p, int h) : p_(p), h_(h) {
        if (h < 1) throw std::invalid_argument("field degree must be >= 1");
        if (!detail::is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
        long long q = 1;
        for (int i = 0; i < h; ++i) {
            q *= p;
            if (q > 65536) throw std::invalid_argument("field order exceeds the 2^16 scope bound");
        }
        q_ = static_cast<int>(q);
        if (h == 1) {
            modulus_ = {0, 1};
        } else {
            for (const auto& e : detail::kModuli) {
                if (e.p == p && e.h == h) {
                    modulus_.assign(e.coeffs.begin(), e.coeffs.begin() + h + 1);
                    break;
                }
            }
            if (modulus_.empty())
                throw std::invalid_argument("unsupported field order " + std::to_string(q_) + " (no built-in modulus)");
            build_tables();
        }
    }

    int p() const { return p_; }
    int h() const { return h_; }
    int q() const { return q_; }

    /// Modulus polynomial, constant term first, leading coefficient 1.
    const std::vector<int>& modulus() const { return modulus_; }

    Fe zero() const { return Fe(0); }
    Fe one() const { return Fe(1); }

    /// Validated element from its integer encoding.
    Fe element(unsigned enc) const {
        if (enc >= static_cast<unsigned>(q_)) throw std::invalid_argument("element encoding out of range for this field");
        return Fe(enc);
    }

    /// All q elements in increasing encoded order.
    std::vector<Fe> elements() const {
        std::vector<Fe> out;
        out.reserve(q_);
        for (int v = 0; v < q_; ++v) out.emplace_back(v);
        return out;
    }

    Fe add(Fe a, Fe b) const {
        check(a); check(b);
        if (h_ == 1) return Fe((a.v + b.v) % q_);
        unsigned r = 0, mul = 1, av = a.v, bv = b.v;
        for (int i = 0; i < h_; ++i) {
            r += ((av + bv) % p_) * mul;
            av /= p_; bv /= p_; mul *= p_;
        }
        return Fe(r);
    }

    Fe neg(Fe a) const {
        check(a);
        if (h_ == 1) return Fe((q_ - a.v) % q_);
        unsigned r = 0, mul = 1, av = a.v;
        for (int i = 0; i < h_; ++i) {
            r += ((p_ - av % p_) % p_) * mul;
            av /= p_; mul *= p_;
        }
        return Fe(r);
    }

    Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }

    Fe mul(Fe a, Fe b) const {
        check(a); check(b);
        if (h_ == 1) return Fe(static_cast<std::uint32_t>(a.v) * b.v % q_);
        return Fe(mul_table_[static_cast<std::size_t>(a.v) * q_ + b.v]);
    }

    Fe inv(Fe a) const {
        check(a);
        if (a.v == 0) throw std::invalid_argument("inversion of zero");
        if (h_ == 1) {
            // extended Euclid on (a, p)
            long long t = 0, newt = 1, r = q_, newr = a.v;
            while (newr != 0) {
                long long quot = r / newr;
                t = std::exchange(newt, t - quot * newt);
                r = std::exchange(newr, r - quot * newr);
            }
            return Fe(static_cast<unsigned>((t % q_ + q_) % q_));
        }
        return Fe(inv_table_[a.v]);
    }

    /// a^e for e >= 0, with pow(a, 0) = 1.
    Fe pow(Fe a, long long e) const {
        check(a);
        if (e < 0) throw std::invalid_argument("negative exponent");
        Fe result = one(), base = a;
        while (e > 0) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }

    friend bool operator==(const Gf& a, const Gf& b) { return a.p_ == b.p_ && a.h_ == b.h_; }

private:
    void check(Fe a) const {
        if (static_cast<int>(a.v) >= q_) throw std::invalid_argument("element encoding " + std::to_string(a.v) + " out of range for GF(" + std::to_string(q_) + ")");
    }

    // Polynomial-basis product reduced by the modulus; used once to fill
    // the multiplication table (extension fields are all <= 256 here).
    unsigned raw_mul(unsigned a, unsigned b) const {
        std::array<int, 17> prod{};
        std::array<int, 9> da{}, db{};
        unsigned av = a, bv = b;
        for (int i = 0; i < h_; ++i) { da[i] = av % p_; av /= p_; }
        for (int i = 0; i < h_; ++i) { db[i] = bv % p_; bv /= p_; }
        for (int i = 0; i < h_; ++i)
            for (int j = 0; j < h_; ++j)
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        for (int d = 2 * h_ - 2; d >= h_; --d) {
            int c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            // x^d = x^(d-h) * (x^h - modulus)  =>  subtract c * modulus shifted
            for (int k = 0; k < h_; ++k)
                prod[d - h_ + k] = ((prod[d - h_ + k] - c * modulus_[k]) % p_ + p_) % p_;
        }
        unsigned r = 0, mul = 1;
        for (int i = 0; i < h_; ++i) { r += prod[i] * mul; mul *= p_; }
        return r;
    }

    void build_tables() {
        mul_table_.resize(static_cast<std::size_t>(q_) * q_);
        for (int a = 0; a < q_; ++a)
            for (int b = a; b < q_; ++b) {
                auto m = static_cast<std::uint16_t>(raw_mul(a, b));
                mul_table_[static_cast<std::size_t>(a) * q_ + b] = m;
                mul_table_[static_cast<std::size_t>(b) * q_ + a] = m;
            }
        inv_table_.assign(q_, 0);
        for (int a = 1; a < q_; ++a) {
            for (int b = 1; b < q_; ++b)
                if (mul_table_[static_cast<std::size_t>(a) * q_ + b] == 1) {
                    inv_table_[a] = static_cast<std::uint16_t>(b);
                    break;
                }
            if (inv_table_[a] == 0)
                throw std::logic_error("built-in modulus is not irreducible");  // unreachable for the shipped table
        }
    }

    int p_, h_, q_;
    std::vector<int> modulus_;
    std::vector<std::uint16_t> mul_table_;
    std::vector<std::uint16_t> inv_table_;
};

}  // namespace clgeo
