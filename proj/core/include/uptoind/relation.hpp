/*
 * Copyright 2026 The uptoind authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UPTOIND_RELATION_HPP
#define UPTOIND_RELATION_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "uptoind/lts.hpp"

namespace uptoind {

// Binary relation on {0, ..., dim-1}, stored as a bit matrix. Rows are padded
// to whole 64-bit words; bits past dim stay zero so word-wise comparison is
// exact.
class Relation {
public:
    Relation() = default;
    explicit Relation(std::uint32_t dim) { reset(dim); }

    static Relation empty(std::uint32_t dim) { return Relation(dim); }
    static Relation full(std::uint32_t dim);
    static Relation identity(std::uint32_t dim);

    std::uint32_t dim() const { return dim_; }
    std::size_t size() const;

    bool contains(StateId p, StateId q) const {
        return (words_[word_index(p, q)] >> (q & 63)) & 1u;
    }
    void add(StateId p, StateId q) { words_[word_index(p, q)] |= std::uint64_t(1) << (q & 63); }
    void remove(StateId p, StateId q) { words_[word_index(p, q)] &= ~(std::uint64_t(1) << (q & 63)); }

    bool subset_of(const Relation& other) const;
    Relation& operator&=(const Relation& other);
    Relation& operator|=(const Relation& other);
    friend Relation operator&(Relation a, const Relation& b) { return a &= b; }
    friend Relation operator|(Relation a, const Relation& b) { return a |= b; }

    // Relational composition: (p,r) iff exists q with (p,q) here and (q,r) there.
    Relation compose(const Relation& other) const;
    Relation transpose() const;
    Relation reflexive_transitive_closure() const;

    bool is_reflexive() const;
    bool is_transitive() const;

    bool operator==(const Relation& other) const {
        return dim_ == other.dim_ && words_ == other.words_;
    }

    // First pair (row-major order) present here but absent in `other`.
    std::optional<std::pair<StateId, StateId>> first_not_in(const Relation& other) const;
    std::vector<std::pair<StateId, StateId>> pairs() const;

    template <class F>
    void for_each(F&& f) const {
        for (StateId p = 0; p < dim_; ++p) {
            const std::uint64_t* row = row_ptr(p);
            for (std::uint32_t w = 0; w < row_words_; ++w) {
                std::uint64_t bits = row[w];
                while (bits) {
                    const int b = std::countr_zero(bits);
                    bits &= bits - 1;
                    f(p, static_cast<StateId>(w * 64 + b));
                }
            }
        }
    }

    const std::uint64_t* row_ptr(StateId p) const { return words_.data() + std::size_t(p) * row_words_; }
    std::uint64_t* row_ptr(StateId p) { return words_.data() + std::size_t(p) * row_words_; }
    std::uint32_t row_words() const { return row_words_; }

private:
    void reset(std::uint32_t dim);
    std::size_t word_index(StateId p, StateId q) const {
        return std::size_t(p) * row_words_ + (q >> 6);
    }
    void require_same_dim(const Relation& other) const;

    std::uint32_t dim_ = 0;
    std::uint32_t row_words_ = 0;
    std::vector<std::uint64_t> words_;
};

// One "<state> <state>" pair per line, whitespace separated; blank lines and
// lines starting with '#' are skipped. States are resolved by display name
// first, then as decimal indices.
Relation parse_rel(const std::string& text, const Lts& lts);
std::string serialize_rel(const Relation& r, const Lts& lts);

}  // namespace uptoind

#endif
