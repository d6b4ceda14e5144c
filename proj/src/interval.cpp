#include "afav/interval.hpp"

#include <algorithm>

#include "afav/error.hpp"

namespace afav {

RationalInterval::RationalInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) raise(ErrorKind::Parameter, "interval with lo > hi");
}

RationalInterval RationalInterval::abs() const {
    if (lo_.sign() >= 0) return *this;
    if (hi_.sign() <= 0) return -*this;
    return RationalInterval(Rational(0), std::max(-lo_, hi_));
}

RationalInterval& RationalInterval::operator+=(const RationalInterval& o) {
    lo_ += o.lo_;
    hi_ += o.hi_;
    return *this;
}

RationalInterval& RationalInterval::operator-=(const RationalInterval& o) {
    Rational nlo = lo_ - o.hi_;
    hi_ -= o.lo_;
    lo_ = std::move(nlo);
    return *this;
}

RationalInterval& RationalInterval::operator*=(const RationalInterval& o) {
    Rational a = lo_ * o.lo_;
    Rational b = lo_ * o.hi_;
    Rational c = hi_ * o.lo_;
    Rational d = hi_ * o.hi_;
    lo_ = std::min(std::min(a, b), std::min(c, d));
    hi_ = std::max(std::max(a, b), std::max(c, d));
    return *this;
}

RationalInterval& RationalInterval::operator/=(const RationalInterval& o) {
    if (o.lo_.sign() <= 0)
        raise(ErrorKind::Precision, "interval division requires a strictly positive divisor");
    RationalInterval recip(Rational(1) / o.hi_, Rational(1) / o.lo_);
    *this *= recip;
    return *this;
}

RationalInterval RationalInterval::hull(const RationalInterval& a, const RationalInterval& b) {
    return RationalInterval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

std::string RationalInterval::str() const {
    return "[" + lo_.str() + "," + hi_.str() + "]";
}

uint64_t RationalInterval::hash() const {
    return lo_.hash() * 0x9e3779b97f4a7c15ULL ^ hi_.hash();
}

} // namespace afav
