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

#include "uptoind/relation.hpp"

#include <bit>
#include <sstream>

namespace uptoind {

void Relation::reset(std::uint32_t dim) {
    dim_ = dim;
    row_words_ = (dim + 63) / 64;
    words_.assign(std::size_t(dim_) * row_words_, 0);
}

void Relation::require_same_dim(const Relation& other) const {
    if (dim_ != other.dim_) throw Error("relation dimensions differ");
}

Relation Relation::full(std::uint32_t dim) {
    Relation r(dim);
    if (dim == 0) return r;
    const std::uint64_t last_mask =
        (dim % 64 == 0) ? ~std::uint64_t(0) : ((std::uint64_t(1) << (dim % 64)) - 1);
    for (StateId p = 0; p < dim; ++p) {
        std::uint64_t* row = r.row_ptr(p);
        for (std::uint32_t w = 0; w + 1 < r.row_words_; ++w) row[w] = ~std::uint64_t(0);
        row[r.row_words_ - 1] = last_mask;
    }
    return r;
}

Relation Relation::identity(std::uint32_t dim) {
    Relation r(dim);
    for (StateId p = 0; p < dim; ++p) r.add(p, p);
    return r;
}

std::size_t Relation::size() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

bool Relation::subset_of(const Relation& other) const {
    require_same_dim(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

Relation& Relation::operator&=(const Relation& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

Relation& Relation::operator|=(const Relation& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
}

Relation Relation::compose(const Relation& other) const {
    require_same_dim(other);
    Relation out(dim_);
    for (StateId p = 0; p < dim_; ++p) {
        const std::uint64_t* row = row_ptr(p);
        std::uint64_t* out_row = out.row_ptr(p);
        for (std::uint32_t w = 0; w < row_words_; ++w) {
            std::uint64_t bits = row[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                const std::uint64_t* mid = other.row_ptr(static_cast<StateId>(w * 64 + b));
                for (std::uint32_t v = 0; v < row_words_; ++v) out_row[v] |= mid[v];
            }
        }
    }
    return out;
}

Relation Relation::transpose() const {
    Relation out(dim_);
    for_each([&](StateId p, StateId q) { out.add(q, p); });
    return out;
}

Relation Relation::reflexive_transitive_closure() const {
    Relation out = *this | identity(dim_);
    for (StateId k = 0; k < dim_; ++k) {
        for (StateId p = 0; p < dim_; ++p) {
            if (!out.contains(p, k)) continue;
            const std::uint64_t* krow = out.row_ptr(k);
            std::uint64_t* prow = out.row_ptr(p);
            // p == k makes this a self-OR, which is harmless.
            for (std::uint32_t w = 0; w < row_words_; ++w) prow[w] |= krow[w];
        }
    }
    return out;
}

bool Relation::is_reflexive() const {
    for (StateId p = 0; p < dim_; ++p)
        if (!contains(p, p)) return false;
    return true;
}

bool Relation::is_transitive() const {
    return compose(*this).subset_of(*this);
}

std::optional<std::pair<StateId, StateId>> Relation::first_not_in(const Relation& other) const {
    require_same_dim(other);
    for (StateId p = 0; p < dim_; ++p) {
        const std::uint64_t* a = row_ptr(p);
        const std::uint64_t* b = other.row_ptr(p);
        for (std::uint32_t w = 0; w < row_words_; ++w) {
            const std::uint64_t diff = a[w] & ~b[w];
            if (diff)
                return std::pair<StateId, StateId>(p,
                                                   static_cast<StateId>(w * 64 + std::countr_zero(diff)));
        }
    }
    return std::nullopt;
}

std::vector<std::pair<StateId, StateId>> Relation::pairs() const {
    std::vector<std::pair<StateId, StateId>> out;
    out.reserve(size());
    for_each([&](StateId p, StateId q) { out.emplace_back(p, q); });
    return out;
}

Relation parse_rel(const std::string& text, const Lts& lts) {
    Relation r(lts.state_count());
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::string first, second, extra;
        if (!(fields >> first) || first[0] == '#') continue;
        if (!(fields >> second))
            throw ParseError("expected two states per line", line_no);
        if (fields >> extra)
            throw ParseError("unexpected trailing field \"" + extra + "\"", line_no);
        try {
            r.add(resolve_state(lts, first), resolve_state(lts, second));
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return r;
}

std::string serialize_rel(const Relation& r, const Lts& lts) {
    if (r.dim() != lts.state_count()) throw Error("relation dimension does not match the system");
    std::ostringstream out;
    r.for_each([&](StateId p, StateId q) { out << lts.state_name(p) << " " << lts.state_name(q) << "\n"; });
    return out.str();
}

}  // namespace uptoind
