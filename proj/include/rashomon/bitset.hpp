#ifndef RASHOMON_BITSET_HPP
#define RASHOMON_BITSET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rashomon {

/// Fixed-length dynamic bitset over sample indices. Bits past `size()` in the
/// last word are always zero, so word-wise equality and popcount are exact.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t size, bool value = false)
        : size_{size}, words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0)
    {
        trim_();
    }

    std::size_t size() const { return size_; }
    std::size_t num_words() const { return words_.size(); }
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value = true)
    {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool none() const
    {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    /// |this ∩ other| without materializing the intersection.
    std::size_t count_and(const Bitset& other) const
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
        return c;
    }

    /// |this ∩ a ∩ b|
    std::size_t count_and(const Bitset& a, const Bitset& b) const
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(
                    std::popcount(words_[i] & a.words_[i] & b.words_[i]));
        return c;
    }

    Bitset& operator&=(const Bitset& o)
    {
        check_(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    Bitset& operator|=(const Bitset& o)
    {
        check_(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    /// this ∩ ¬o
    Bitset& and_not(const Bitset& o)
    {
        check_(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    Bitset operator~() const
    {
        Bitset r = *this;
        for (auto& w : r.words_) w = ~w;
        r.trim_();
        return r;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset and_not(Bitset a, const Bitset& b) { return a.and_not(b); }

    friend bool operator==(const Bitset& a, const Bitset& b)
    {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    template <typename F>
    void for_each(F&& f) const
    {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int bit = std::countr_zero(w);
                f(wi * 64 + static_cast<std::size_t>(bit));
                w &= w - 1;
            }
        }
    }

    std::uint64_t hash() const
    {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
        for (auto w : words_) h = mix(h ^ w);
        return h;
    }

    static std::uint64_t mix(std::uint64_t x)
    {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    void trim_()
    {
        if (size_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
    void check_(const Bitset& o) const
    {
        if (o.size_ != size_)
            throw std::invalid_argument("bitset size mismatch");
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace rashomon

#endif
