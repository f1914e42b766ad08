#pragma once

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scatter {

/// Anything with a solvable word problem can stand in for H.
template <class T>
concept WordProblemGroup = std::regular<T> && std::totally_ordered<T> && requires(const T& a, const T& b) {
    { a * b } -> std::convertible_to<T>;
    { a.inverse() } -> std::convertible_to<T>;
    { a.is_identity() } -> std::convertible_to<bool>;
    { a.str() } -> std::convertible_to<std::string>;
};

/// Generator alphabets.  Each names its generators by single characters.
struct CD { static constexpr std::string_view names = "cd"; };
struct AB { static constexpr std::string_view names = "ab"; };

/// Reduced word in the free group on Alphabet::names.
/// Letters are stored as +(i+1) / -(i+1) for generator i.
template <class Alphabet>
class FreeWord {
public:
    using letter_type = std::int8_t;
    using alphabet_type = Alphabet;
    static constexpr int rank = static_cast<int>(Alphabet::names.size());

    FreeWord() = default;

    static FreeWord generator(int i, int power = 1) {
        if (i < 0 || i >= rank) throw std::out_of_range("free generator index out of range");
        FreeWord w;
        auto l = static_cast<letter_type>(power < 0 ? -(i + 1) : (i + 1));
        for (int k = 0; k < (power < 0 ? -power : power); ++k) w.letters_.push_back(l);
        return w;
    }

    /// Reduces an arbitrary letter list.
    static FreeWord from_letters(const std::vector<letter_type>& raw) {
        FreeWord w;
        for (letter_type l : raw) {
            if (l == 0 || l > rank || l < -rank) throw std::invalid_argument("bad free-group letter");
            w.push(l);
        }
        return w;
    }

    const std::vector<letter_type>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool is_identity() const { return letters_.empty(); }

    FreeWord inverse() const {
        FreeWord w;
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(static_cast<letter_type>(-*it));
        return w;
    }

    friend FreeWord operator*(const FreeWord& u, const FreeWord& v) {
        FreeWord w = u;
        for (letter_type l : v.letters_) w.push(l);
        return w;
    }

    /// Exponent sum of generator i.
    std::int64_t exponent_sum(int i) const {
        std::int64_t s = 0;
        for (letter_type l : letters_) {
            if (l == i + 1) ++s;
            else if (l == -(i + 1)) --s;
        }
        return s;
    }

    friend bool operator==(const FreeWord&, const FreeWord&) = default;

    // Shortlex order.
    friend std::strong_ordering operator<=>(const FreeWord& u, const FreeWord& v) {
        if (auto c = u.letters_.size() <=> v.letters_.size(); c != 0) return c;
        return u.letters_ <=> v.letters_;
    }

    /// "1", or runs like "ab^-1c^3".
    std::string str() const {
        if (letters_.empty()) return "1";
        std::string out;
        std::size_t i = 0;
        while (i < letters_.size()) {
            std::size_t j = i;
            while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
            long run = static_cast<long>(j - i);
            letter_type l = letters_[i];
            out += Alphabet::names[static_cast<std::size_t>((l > 0 ? l : -l) - 1)];
            if (l < 0) out += "^-" + std::to_string(run);
            else if (run > 1) out += "^" + std::to_string(run);
            i = j;
        }
        return out;
    }

private:
    void push(letter_type l) {
        if (!letters_.empty() && letters_.back() == -l) letters_.pop_back();
        else letters_.push_back(l);
    }

    std::vector<letter_type> letters_;
};

using HWord = FreeWord<CD>;
using FWord = FreeWord<AB>;

template <class A>
FreeWord<A> free_mul(const FreeWord<A>& u, const FreeWord<A>& v) { return u * v; }

template <class A>
FreeWord<A> free_inv(const FreeWord<A>& u) { return u.inverse(); }

/// Number of reduced words of length exactly n in a free group of rank r.
inline std::uint64_t sphere_size(int rank, int n) {
    if (n == 0) return 1;
    std::uint64_t s = 2 * static_cast<std::uint64_t>(rank);
    for (int i = 1; i < n; ++i) s *= 2 * static_cast<std::uint64_t>(rank) - 1;
    return s;
}

/// All reduced words of length exactly n, shortlex ordered.
template <class A = CD>
std::vector<FreeWord<A>> sphere(int radius) {
    if (radius < 1) throw std::invalid_argument("sphere radius must be >= 1");
    using L = typename FreeWord<A>::letter_type;
    constexpr int r = FreeWord<A>::rank;
    std::vector<L> alphabet;
    for (int i = 1; i <= r; ++i) {
        alphabet.push_back(static_cast<L>(-i));
        alphabet.push_back(static_cast<L>(i));
    }
    std::sort(alphabet.begin(), alphabet.end());
    std::vector<std::vector<L>> layer{{}};
    for (int step = 0; step < radius; ++step) {
        std::vector<std::vector<L>> next;
        next.reserve(layer.size() * (2 * r - 1));
        for (const auto& w : layer)
            for (L l : alphabet) {
                if (!w.empty() && w.back() == -l) continue;
                auto v = w;
                v.push_back(l);
                next.push_back(std::move(v));
            }
        layer = std::move(next);
    }
    std::vector<FreeWord<A>> out;
    out.reserve(layer.size());
    for (const auto& w : layer) out.push_back(FreeWord<A>::from_letters(w));
    return out;
}

inline std::uint64_t ball_size(int rank, int radius) {
    std::uint64_t s = 0;
    for (int n = 0; n <= radius; ++n) s += sphere_size(rank, n);
    return s;
}

namespace detail {
// Position of a letter in the sorted alphabet -r..-1,1..r.
inline int letter_pos(int l, int r) { return l < 0 ? l + r : l + r - 1; }
inline int pos_letter(int p, int r) { return p < r ? p - r : p - r + 1; }
}  // namespace detail

/// Shortlex rank of a reduced letter sequence given as two pieces (a then b) that
/// concatenate without cancellation.
template <class L>
std::uint64_t rank_letters(int r, const L* a, std::size_t na, const L* b, std::size_t nb) {
    const std::size_t n = na + nb;
    if (n == 0) return 0;
    auto at = [&](std::size_t i) -> int { return i < na ? a[i] : b[i - na]; };
    std::uint64_t idx = static_cast<std::uint64_t>(detail::letter_pos(at(0), r));
    const std::uint64_t base = 2 * static_cast<std::uint64_t>(r) - 1;
    for (std::size_t i = 1; i < n; ++i) {
        int q = detail::letter_pos(at(i), r);
        int pinv = detail::letter_pos(-at(i - 1), r);
        idx = idx * base + static_cast<std::uint64_t>(q < pinv ? q : q - 1);
    }
    return ball_size(r, static_cast<int>(n) - 1) + idx;
}

/// Index of w in ball order (shortlex); a bijection onto [0, ball_size).
template <class A>
std::uint64_t word_rank(const FreeWord<A>& w) {
    const auto& l = w.letters();
    return rank_letters(FreeWord<A>::rank, l.data(), l.size(), l.data(), 0);
}

/// Rank of u*v without building the product.
template <class A>
std::uint64_t product_rank(const FreeWord<A>& u, const FreeWord<A>& v) {
    const auto& a = u.letters();
    const auto& b = v.letters();
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[a.size() - 1 - k] == -b[k]) ++k;
    return rank_letters(FreeWord<A>::rank, a.data(), a.size() - k, b.data() + k, b.size() - k);
}

template <class A>
FreeWord<A> word_unrank(std::uint64_t idx) {
    constexpr int r = FreeWord<A>::rank;
    int n = 0;
    while (idx >= sphere_size(r, n)) {
        idx -= sphere_size(r, n);
        ++n;
    }
    using L = typename FreeWord<A>::letter_type;
    std::vector<L> out(static_cast<std::size_t>(n));
    const std::uint64_t base = 2 * static_cast<std::uint64_t>(r) - 1;
    std::vector<int> digits(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 1; --i) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(idx % base);
        idx /= base;
    }
    if (n > 0) digits[0] = static_cast<int>(idx);
    for (int i = 0; i < n; ++i) {
        int q = digits[static_cast<std::size_t>(i)];
        if (i > 0) {
            int pinv = detail::letter_pos(-out[static_cast<std::size_t>(i - 1)], r);
            if (q >= pinv) ++q;
        }
        out[static_cast<std::size_t>(i)] = static_cast<L>(detail::pos_letter(q, r));
    }
    return FreeWord<A>::from_letters(out);
}

/// Words of length <= radius, shortlex ordered.
template <class A = CD>
std::vector<FreeWord<A>> ball(int radius) {
    std::vector<FreeWord<A>> out{FreeWord<A>{}};
    for (int n = 1; n <= radius; ++n) {
        auto s = sphere<A>(n);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

}  // namespace scatter
