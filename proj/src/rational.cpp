#include "mtasep/rational.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "mtasep/errors.hpp"

namespace mtasep {

namespace {

constexpr std::size_t kMaxN = 6;

std::size_t factorial(std::size_t n) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

// Lehmer rank of a permutation of 0..n-1.
using Perm = std::array<std::uint8_t, kMaxN>;

std::size_t perm_rank(const Perm& p, std::size_t n) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j) smaller += p[j] < p[i];
        r = r * (n - i) + smaller;
    }
    return r;
}

template <class T>
std::complex<T> ipow(std::complex<T> z, Int e) {
    if (e < 0) return T(1) / ipow(z, -e);
    std::complex<T> r(1), b = z;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

enum class Family { Phi, Psi };

// Memoized exchange recursion. State: index tuple as a permutation of the
// sorted entries, argument tuple as a permutation of the input w.
template <class T>
class Evaluator {
public:
    Evaluator(Family fam, std::span<const Int> idx, std::span<const std::complex<T>> w, Reduction order)
        : fam_(fam), order_(order), n_(idx.size()), w_(w.begin(), w.end()) {
        if (n_ == 0 || n_ > kMaxN) throw std::invalid_argument("index tuple length must be 1..6");
        if (w.size() != n_) throw std::invalid_argument("argument tuple length mismatch");
        sorted_.assign(idx.begin(), idx.end());
        std::sort(sorted_.begin(), sorted_.end());
        if (std::adjacent_find(sorted_.begin(), sorted_.end()) != sorted_.end())
            throw std::invalid_argument("index tuple entries must be distinct");
        for (const auto& z : w_)
            if (z == std::complex<T>(-1)) throw std::invalid_argument("argument at the pole w = -1");
        sep_ = separation_floor<T>(w);
        const std::size_t f = factorial(n_);
        memo_.assign(f * f, std::complex<T>(0));
        known_.assign(f * f, false);
        fact_ = f;
        for (std::size_t i = 0; i < n_; ++i)
            start_[i] = static_cast<std::uint8_t>(
                std::lower_bound(sorted_.begin(), sorted_.end(), idx[i]) - sorted_.begin());
    }

    std::complex<T> value() {
        Perm wp{};
        for (std::size_t i = 0; i < n_; ++i) wp[i] = static_cast<std::uint8_t>(i);
        return eval(start_, wp);
    }

private:
    // Position i of a descent to remove: phi removes mu_i > mu_{i+1}, psi removes nu_i < nu_{i+1}.
    std::ptrdiff_t find_step(const Perm& ip) const {
        auto bad = [&](std::size_t i) { return fam_ == Family::Phi ? ip[i] > ip[i + 1] : ip[i] < ip[i + 1]; };
        if (order_ == Reduction::Leftmost) {
            for (std::size_t i = 0; i + 1 < n_; ++i)
                if (bad(i)) return static_cast<std::ptrdiff_t>(i);
        } else {
            for (std::size_t i = n_ - 1; i-- > 0;)
                if (bad(i)) return static_cast<std::ptrdiff_t>(i);
        }
        return -1;
    }

    std::complex<T> base(const Perm& ip, const Perm& wp) const {
        std::complex<T> r(1);
        for (std::size_t i = 0; i < n_; ++i) {
            const std::complex<T> one_plus = T(1) + w_[wp[i]];
            const Int e = sorted_[ip[i]];
            r *= ipow(one_plus, fam_ == Family::Phi ? -e : e);
        }
        return r;
    }

    std::complex<T> eval(const Perm& ip, const Perm& wp) {
        const std::size_t key = perm_rank(ip, n_) * fact_ + perm_rank(wp, n_);
        if (known_[key]) return memo_[key];
        std::complex<T> result;
        const std::ptrdiff_t s = find_step(ip);
        if (s < 0) {
            result = base(ip, wp);
        } else {
            const auto i = static_cast<std::size_t>(s);
            const std::complex<T> wi = w_[wp[i]], wj = w_[wp[i + 1]];
            if (std::abs(wi - wj) < sep_)
                throw ArgumentsTooClose("exchange step with |w_i - w_{i+1}| below separation floor");
            Perm ip2 = ip, wp2 = wp;
            std::swap(ip2[i], ip2[i + 1]);
            std::swap(wp2[i], wp2[i + 1]);
            const std::complex<T> a = eval(ip2, wp);
            const std::complex<T> b = eval(ip2, wp2);
            if (fam_ == Family::Phi)
                result = wj * (T(1) + wi) / (wi - wj) * (a - b);
            else
                result = (wi * (T(1) + wj) * a - wj * (T(1) + wi) * b) / (wi - wj);
        }
        known_[key] = true;
        memo_[key] = result;
        return result;
    }

    Family fam_;
    Reduction order_;
    std::size_t n_;
    std::vector<std::complex<T>> w_;
    std::vector<Int> sorted_;
    Perm start_{};
    std::size_t fact_ = 1;
    T sep_;
    std::vector<std::complex<T>> memo_;
    std::vector<bool> known_;
};

}  // namespace

template <class T>
T separation_floor(std::span<const std::complex<T>> w) {
    T m = 0;
    for (const auto& z : w) m = std::max(m, std::abs(z));
    return T(1e-6) * m;
}

template <class T>
std::complex<T> eval_phi(std::span<const Int> mu, std::span<const std::complex<T>> w, Reduction order) {
    return Evaluator<T>(Family::Phi, mu, w, order).value();
}

template <class T>
std::complex<T> eval_psi(std::span<const Int> nu, std::span<const std::complex<T>> w, Reduction order) {
    return Evaluator<T>(Family::Psi, nu, w, order).value();
}

template double separation_floor<double>(std::span<const std::complex<double>>);
template long double separation_floor<long double>(std::span<const std::complex<long double>>);
template std::complex<double> eval_phi<double>(std::span<const Int>, std::span<const std::complex<double>>, Reduction);
template std::complex<long double> eval_phi<long double>(std::span<const Int>,
                                                         std::span<const std::complex<long double>>, Reduction);
template std::complex<double> eval_psi<double>(std::span<const Int>, std::span<const std::complex<double>>, Reduction);
template std::complex<long double> eval_psi<long double>(std::span<const Int>,
                                                         std::span<const std::complex<long double>>, Reduction);

}  // namespace mtasep
