#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace delib {

// Fixed-width dynamic bitset used for voter sets (n bits) and candidate
// sets (m bits). Word count is small (n, m <= a few hundred here), so all
// operations are simple linear scans over uint64 words.
class Bitset {
  public:
    Bitset() = default;
    explicit Bitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

    int size() const { return nbits_; }

    void set(int i) { w_[static_cast<size_t>(i) >> 6] |= 1ULL << (i & 63); }
    void reset(int i) { w_[static_cast<size_t>(i) >> 6] &= ~(1ULL << (i & 63)); }
    bool test(int i) const { return (w_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1; }

    int count() const {
        int c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (uint64_t w : w_)
            if (w) return true;
        return false;
    }

    Bitset& operator&=(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

    bool operator==(const Bitset&) const = default;

    bool is_subset_of(const Bitset& o) const {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    static int and_count(const Bitset& a, const Bitset& b) {
        assert(a.nbits_ == b.nbits_);
        int c = 0;
        for (size_t i = 0; i < a.w_.size(); ++i) c += std::popcount(a.w_[i] & b.w_[i]);
        return c;
    }

    // Popcount of (a & ~b).
    static int andnot_count(const Bitset& a, const Bitset& b) {
        assert(a.nbits_ == b.nbits_);
        int c = 0;
        for (size_t i = 0; i < a.w_.size(); ++i) c += std::popcount(a.w_[i] & ~b.w_[i]);
        return c;
    }

    std::vector<int> to_indices() const {
        std::vector<int> out;
        out.reserve(static_cast<size_t>(count()));
        for (size_t wi = 0; wi < w_.size(); ++wi) {
            uint64_t w = w_[wi];
            while (w) {
                const int b = std::countr_zero(w);
                out.push_back(static_cast<int>(wi * 64) + b);
                w &= w - 1;
            }
        }
        return out;
    }

  private:
    int nbits_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace delib
