#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ulpa {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("scalar overflow in addition");
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("scalar overflow in multiplication");
    return r;
}

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

// A scalar is a reduced fraction. Rings other than the rationals keep den == 1;
// modular scalars keep num in [0, modulus).
struct Scalar {
    long long num = 0;
    long long den = 1;

    friend bool operator==(const Scalar&, const Scalar&) = default;
    friend auto operator<=>(const Scalar&, const Scalar&) = default;
};

// Coefficient ring: the integers, the rationals, or Z/n. All arithmetic is
// exact; field-only operations check is_field().
class Ring {
public:
    enum class Kind { integers, rationals, mod };

    static Ring integers() { return Ring{Kind::integers, 0}; }
    static Ring rationals() { return Ring{Kind::rationals, 0}; }
    static Ring integers_mod(long long n) {
        if (n < 2) throw Error("modulus must be at least 2");
        return Ring{Kind::mod, n};
    }

    // "Z", "Q" or "Z/n"
    static Ring parse(const std::string& text) {
        if (text == "Z") return integers();
        if (text == "Q") return rationals();
        if (text.rfind("Z/", 0) == 0) {
            long long n = 0;
            try {
                n = std::stoll(text.substr(2));
            } catch (const std::exception&) {
                throw Error("bad ring name: " + text);
            }
            return integers_mod(n);
        }
        throw Error("bad ring name: " + text + " (expected Z, Q or Z/n)");
    }

    Kind kind() const { return kind_; }
    long long modulus() const { return modulus_; }
    bool is_field() const {
        return kind_ == Kind::rationals || (kind_ == Kind::mod && detail::is_prime(modulus_));
    }
    std::string name() const {
        switch (kind_) {
            case Kind::integers: return "Z";
            case Kind::rationals: return "Q";
            default: return "Z/" + std::to_string(modulus_);
        }
    }

    friend bool operator==(const Ring&, const Ring&) = default;

    Scalar zero() const { return Scalar{0, 1}; }
    Scalar one() const { return from_int(1); }

    Scalar from_int(long long n) const {
        if (kind_ == Kind::mod) return Scalar{mod_reduce(n), 1};
        return Scalar{n, 1};
    }

    // num/den as written in source text; rejects fractions outside Q.
    Scalar make(long long num, long long den) const {
        if (den == 0) throw Error("zero denominator");
        if (kind_ == Kind::rationals) return normalize(num, den);
        if (den != 1 && den != -1)
            throw Error("fraction " + std::to_string(num) + "/" + std::to_string(den) +
                        " is not valid in ring " + name());
        return from_int(den == -1 ? -num : num);
    }

    Scalar add(const Scalar& a, const Scalar& b) const {
        using detail::checked_add;
        using detail::checked_mul;
        if (kind_ == Kind::rationals)
            return normalize(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                             checked_mul(a.den, b.den));
        return from_int(checked_add(a.num, b.num));
    }

    Scalar sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }

    Scalar neg(const Scalar& a) const {
        if (kind_ == Kind::mod) return from_int(-a.num);
        return Scalar{-a.num, a.den};
    }

    Scalar mul(const Scalar& a, const Scalar& b) const {
        using detail::checked_mul;
        if (kind_ == Kind::rationals)
            return normalize(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
        return from_int(checked_mul(a.num, b.num));
    }

    Scalar inv(const Scalar& a) const {
        if (is_zero(a)) throw Error("division by zero");
        if (kind_ == Kind::rationals) return normalize(a.den, a.num);
        if (kind_ == Kind::mod && detail::is_prime(modulus_)) {
            // Fermat inverse.
            long long result = 1, base = a.num, exp = modulus_ - 2;
            while (exp > 0) {
                if (exp & 1) result = result * base % modulus_;
                base = base * base % modulus_;
                exp >>= 1;
            }
            return Scalar{result, 1};
        }
        throw Error("ring " + name() + " is not a field: no inverses");
    }

    bool is_zero(const Scalar& a) const { return a.num == 0; }

    Scalar parse_scalar(const std::string& text) const {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return make(std::stoll(text), 1);
            return make(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error("bad scalar literal: " + text);
        }
    }

    std::string str(const Scalar& a) const {
        if (a.den == 1) return std::to_string(a.num);
        return std::to_string(a.num) + "/" + std::to_string(a.den);
    }

private:
    Ring(Kind kind, long long modulus) : kind_(kind), modulus_(modulus) {}

    long long mod_reduce(long long n) const {
        long long r = n % modulus_;
        return r < 0 ? r + modulus_ : r;
    }

    static Scalar normalize(long long num, long long den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
        return Scalar{num, den};
    }

    Kind kind_;
    long long modulus_;
};

}  // namespace ulpa
