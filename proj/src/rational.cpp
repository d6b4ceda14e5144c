#include "afav/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "afav/error.hpp"

namespace afav {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

// Symmetric small range so negation never overflows.
constexpr int64_t kSmallMax = std::numeric_limits<int64_t>::max();

u128 abs_u128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

mpz_class mpz_from_u128(u128 v) {
    mpz_class hi(static_cast<unsigned long>(v >> 64));
    mpz_class lo(static_cast<unsigned long>(v & 0xffffffffffffffffULL));
    return (hi << 64) + lo;
}

mpz_class mpz_from_i128(i128 v) {
    mpz_class m = mpz_from_u128(abs_u128(v));
    return v < 0 ? mpz_class(-m) : m;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t hash_mpz(const mpz_class& z) {
    const mpz_srcptr p = z.get_mpz_t();
    uint64_t h = splitmix64(static_cast<uint64_t>(mpz_sgn(p)) + 0x51ed2701);
    const size_t n = mpz_size(p);
    for (size_t i = 0; i < n; ++i)
        h = splitmix64(h ^ static_cast<uint64_t>(mpz_getlimbn(p, i)));
    return h;
}

} // namespace

struct Rational::Big {
    mpq_class q; // canonical, and never representable inline

    explicit Big(mpq_class v) : q(std::move(v)) {}
};

void Rational::set_big(Big* b) noexcept {
    delete big_;
    big_ = b;
}

Rational::~Rational() { delete big_; }

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_), big_(nullptr) {
    if (o.big_) big_ = new Big(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
    if (this == &o) return *this;
    num_ = o.num_;
    den_ = o.den_;
    set_big(o.big_ ? new Big(*o.big_) : nullptr);
    return *this;
}

Rational& Rational::operator=(Rational&& o) noexcept {
    if (this == &o) return *this;
    num_ = o.num_;
    den_ = o.den_;
    set_big(o.big_);
    o.big_ = nullptr;
    return *this;
}

Rational Rational::from_i128(i128 num, i128 den) {
    Rational r;
    if (abs_u128(num) <= static_cast<u128>(kSmallMax) && abs_u128(den) <= static_cast<u128>(kSmallMax)) {
        r.num_ = static_cast<int64_t>(num);
        r.den_ = static_cast<int64_t>(den);
    } else {
        mpq_class q(mpz_from_i128(num), mpz_from_i128(den));
        r.big_ = new Big(std::move(q));
    }
    return r;
}

void Rational::normalize_from_i128(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) {
        *this = Rational();
        return;
    }
    u128 g = gcd_u128(abs_u128(num), static_cast<u128>(den));
    if (g > 1) {
        num = num < 0 ? -static_cast<i128>(abs_u128(num) / g) : static_cast<i128>(abs_u128(num) / g);
        den = static_cast<i128>(static_cast<u128>(den) / g);
    }
    *this = from_i128(num, den);
}

Rational::Rational(int64_t num, int64_t den) : num_(0), den_(1), big_(nullptr) {
    if (den == 0) raise(ErrorKind::Parameter, "rational with zero denominator");
    normalize_from_i128(num, den);
}

Rational::Rational(const mpz_class& num, const mpz_class& den) : num_(0), den_(1), big_(nullptr) {
    if (den == 0) raise(ErrorKind::Parameter, "rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        num_ = q.get_num().get_si();
        den_ = q.get_den().get_si();
    } else {
        big_ = new Big(std::move(q));
    }
}

Rational Rational::parse(std::string_view text) {
    auto bad = [&]() -> Rational {
        raise(ErrorKind::Syntax, "invalid scalar '" + std::string(text) + "' (expected [-]digits[/digits])");
    };
    if (text.empty()) return bad();
    size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    size_t num_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_begin) return bad();
    std::string num_digits(text.substr(num_begin, i - num_begin));
    std::string den_digits = "1";
    if (i < text.size()) {
        if (text[i] != '/') return bad();
        ++i;
        size_t den_begin = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == den_begin || i != text.size()) return bad();
        den_digits = std::string(text.substr(den_begin));
    }
    mpz_class num(num_digits, 10), den(den_digits, 10);
    if (den == 0) raise(ErrorKind::Syntax, "zero denominator in '" + std::string(text) + "'");
    if (neg) num = -num;
    return Rational(num, den);
}

Rational Rational::pow(const Rational& base, uint64_t exp) {
    Rational acc(1);
    Rational b = base;
    while (exp > 0) {
        if (exp & 1) acc *= b;
        exp >>= 1;
        if (exp > 0) b *= b;
    }
    return acc;
}

bool Rational::is_integer() const {
    return big_ ? big_->q.get_den() == 1 : den_ == 1;
}

int Rational::sign() const {
    if (big_) return mpq_sgn(big_->q.get_mpq_t());
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

Rational Rational::operator-() const {
    Rational r;
    if (big_) {
        r.big_ = new Big(mpq_class(-big_->q));
    } else {
        r.num_ = -num_;
        r.den_ = den_;
    }
    return r;
}

Rational Rational::abs() const {
    return sign() < 0 ? -*this : *this;
}

namespace {

// Demote a canonical mpq back inline when it fits.
void assign_from_mpq(Rational& out, mpq_class q);

} // namespace

Rational& Rational::operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (den_ == 1 && o.den_ == 1) {
            i128 n = static_cast<i128>(num_) + o.num_;
            *this = from_i128(n, 1);
            return *this;
        }
        i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
        i128 d = static_cast<i128>(den_) * o.den_;
        normalize_from_i128(n, d);
        return *this;
    }
    mpq_class q = (big_ ? big_->q : mpq_class(num_, den_)) +
                  (o.big_ ? o.big_->q : mpq_class(o.num_, o.den_));
    assign_from_mpq(*this, std::move(q));
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (den_ == 1 && o.den_ == 1) {
            i128 n = static_cast<i128>(num_) - o.num_;
            *this = from_i128(n, 1);
            return *this;
        }
        i128 n = static_cast<i128>(num_) * o.den_ - static_cast<i128>(o.num_) * den_;
        i128 d = static_cast<i128>(den_) * o.den_;
        normalize_from_i128(n, d);
        return *this;
    }
    mpq_class q = (big_ ? big_->q : mpq_class(num_, den_)) -
                  (o.big_ ? o.big_->q : mpq_class(o.num_, o.den_));
    assign_from_mpq(*this, std::move(q));
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (den_ == 1 && o.den_ == 1) {
            i128 n = static_cast<i128>(num_) * o.num_;
            *this = from_i128(n, 1);
            return *this;
        }
        // Cross-reduce first so the products stay small and already coprime.
        int64_t a = num_, b = den_, c = o.num_, d = o.den_;
        int64_t g1 = std::gcd(a < 0 ? -a : a, d);
        int64_t g2 = std::gcd(c < 0 ? -c : c, b);
        i128 n = static_cast<i128>(a / g1) * (c / g2);
        i128 dn = static_cast<i128>(b / g2) * (d / g1);
        *this = from_i128(n, dn);
        return *this;
    }
    mpq_class q = (big_ ? big_->q : mpq_class(num_, den_)) *
                  (o.big_ ? o.big_->q : mpq_class(o.num_, o.den_));
    assign_from_mpq(*this, std::move(q));
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero() || (o.big_ && mpq_sgn(o.big_->q.get_mpq_t()) == 0))
        raise(ErrorKind::Parameter, "division by zero");
    if (!big_ && !o.big_) {
        int64_t on = o.num_, od = o.den_;
        if (on < 0) {
            on = -on;
            od = -od; // sign moves to the denominator, fixed by normalize
        }
        int64_t a = num_, b = den_;
        int64_t g1 = std::gcd(a < 0 ? -a : a, on);
        int64_t g2 = std::gcd(od < 0 ? -od : od, b);
        i128 n = static_cast<i128>(a / g1) * (od / g2);
        i128 dn = static_cast<i128>(b / g2) * (on / g1);
        normalize_from_i128(n, dn); // only sign fixing remains
        return *this;
    }
    mpq_class q = (big_ ? big_->q : mpq_class(num_, den_)) /
                  (o.big_ ? o.big_->q : mpq_class(o.num_, o.den_));
    assign_from_mpq(*this, std::move(q));
    return *this;
}

namespace {

void assign_from_mpq(Rational& out, mpq_class q) {
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        out = Rational(q.get_num().get_si(), q.get_den().get_si());
    } else {
        out = Rational(q.get_num(), q.get_den());
    }
}

} // namespace

bool Rational::operator==(const Rational& o) const {
    if (big_ || o.big_) {
        // Both canonical; inline and heap forms never alias the same value.
        if (!big_ || !o.big_) return false;
        return big_->q == o.big_->q;
    }
    return num_ == o.num_ && den_ == o.den_;
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    if (!big_ && !o.big_) {
        i128 l = static_cast<i128>(num_) * o.den_;
        i128 r = static_cast<i128>(o.num_) * den_;
        return l < r ? std::strong_ordering::less
                     : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    mpq_class l = big_ ? big_->q : mpq_class(num_, den_);
    mpq_class r = o.big_ ? o.big_->q : mpq_class(o.num_, o.den_);
    int c = cmp(l, r);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Rational::str() const {
    if (big_) return big_->q.get_str();
    std::string s = std::to_string(num_);
    if (den_ != 1) {
        s += '/';
        s += std::to_string(den_);
    }
    return s;
}

std::string Rational::decimal(int digits) const {
    if (digits < 1) raise(ErrorKind::Parameter, "decimal() needs digits >= 1");
    mpz_class n = num_mpz(), d = den_mpz();
    bool neg = n < 0;
    if (neg) n = -n;
    mpz_class ip = n / d;
    mpz_class rem = n % d;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpz_class frac = rem * scale / d; // truncation = round toward zero
    std::string fs = frac.get_str();
    if (static_cast<int>(fs.size()) < digits) fs.insert(0, digits - fs.size(), '0');
    std::string out;
    if (neg && (ip != 0 || frac != 0)) out += '-';
    out += ip.get_str();
    out += '.';
    out += fs;
    return out;
}

mpz_class Rational::num_mpz() const {
    return big_ ? big_->q.get_num() : mpz_class(static_cast<long>(num_));
}

mpz_class Rational::den_mpz() const {
    return big_ ? big_->q.get_den() : mpz_class(static_cast<long>(den_));
}

double Rational::to_double() const {
    if (big_) return big_->q.get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

uint64_t Rational::hash() const {
    if (big_) return hash_mpz(big_->q.get_num()) * 0x100000001b3ULL ^ hash_mpz(big_->q.get_den());
    return splitmix64(static_cast<uint64_t>(num_)) * 0x100000001b3ULL ^
           splitmix64(static_cast<uint64_t>(den_));
}

} // namespace afav
