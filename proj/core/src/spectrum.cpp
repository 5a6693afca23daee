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

#include "uptoind/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace uptoind {

std::string_view family_name(Family fam) {
    switch (fam) {
        case Family::Trace: return "trace";
        case Family::Failure: return "failure";
        case Family::Ready: return "ready";
        case Family::FailureTrace: return "failure-trace";
        case Family::ReadyTrace: return "ready-trace";
        case Family::Simulation: return "simulation";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name) {
    for (Family f : all_families)
        if (family_name(f) == name) return f;
    return std::nullopt;
}

namespace {

bool refusal_family(Family f) { return f == Family::Failure || f == Family::FailureTrace; }
bool ready_family(Family f) { return f == Family::Ready || f == Family::ReadyTrace; }
bool decorated_family(Family f) { return f == Family::FailureTrace || f == Family::ReadyTrace; }

// A refusal observation: one atom with an empty must set, or a nonempty
// conjunction of such atoms.
bool is_refusal_obs(const Observable& t) {
    if (t.kind() == Observable::Kind::Atom)
        return t.atom_obs().must.empty() && !t.atom_obs().must_not.empty();
    if (t.kind() == Observable::Kind::Conj && !t.children().empty()) {
        for (const Observable& c : t.children())
            if (c.kind() != Observable::Kind::Atom || !c.atom_obs().must.empty() ||
                c.atom_obs().must_not.empty())
                return false;
        return true;
    }
    return false;
}

// An exact ready-set observation: must and must_not partition the alphabet.
bool is_ready_obs(const ObsFamily& fam, const Observable& t) {
    if (t.kind() != Observable::Kind::Atom) return false;
    return t.atom_obs().must.size() + t.atom_obs().must_not.size() == fam.alphabet_size;
}

bool is_decoration(const ObsFamily& fam, const Observable& t) {
    return refusal_family(fam.kind) ? is_refusal_obs(t) : is_ready_obs(fam, t);
}

bool member(const ObsFamily& fam, const Observable& t);

bool conj_member(const ObsFamily& fam, const Observable& t) {
    // Decoration children plus at most one diamond whose body is again a
    // member. Diamonds under a conjunction only exist in the trace-decorated
    // families.
    std::size_t diamonds = 0;
    for (const Observable& c : t.children()) {
        if (c.kind() == Observable::Kind::Diamond) {
            if (++diamonds > 1 || !member(fam, c.body())) return false;
        } else if (!is_decoration(fam, c)) {
            return false;
        }
    }
    return diamonds == 0 || decorated_family(fam.kind);
}

bool member(const ObsFamily& fam, const Observable& t) {
    if (t.is_top()) return true;
    switch (fam.kind) {
        case Family::Trace:
            return t.kind() == Observable::Kind::Diamond && member(fam, t.body());
        case Family::Failure:
        case Family::Ready:
        case Family::FailureTrace:
        case Family::ReadyTrace:
            if (t.kind() == Observable::Kind::Diamond) return member(fam, t.body());
            if (is_decoration(fam, t)) return true;
            return t.kind() == Observable::Kind::Conj && conj_member(fam, t);
        case Family::Simulation:
            if (t.kind() == Observable::Kind::Diamond) return member(fam, t.body());
            if (t.kind() == Observable::Kind::Conj) {
                for (const Observable& c : t.children())
                    if (!member(fam, c)) return false;
                return true;
            }
            return false;
    }
    return false;
}

}  // namespace

bool family_member(const ObsFamily& fam, const Observable& theta) {
    return member(fam, theta);
}

namespace {

class Emitter {
public:
    explicit Emitter(std::size_t cap) : cap_(cap) {}

    void emit(Observable t) {
        reserve(1);
        out_.push_back(std::move(t));
    }

    // Fails fast when `pending` more formulas cannot fit, so generation
    // loops abort before building a huge intermediate level.
    void reserve(std::size_t pending) const {
        if (out_.size() + pending > cap_)
            throw CapExceeded("formula enumeration exceeded the cap of " + std::to_string(cap_));
    }

    std::vector<Observable> take() { return std::move(out_); }

private:
    std::size_t cap_;
    std::vector<Observable> out_;
};

// All nonempty refusal set atoms over the alphabet.
std::vector<Observable> refusal_atoms(std::uint32_t alpha) {
    std::vector<Observable> out;
    for (std::uint32_t mask = 1; mask < (1u << alpha); ++mask) {
        std::vector<ActionId> b;
        for (ActionId a = 0; a < alpha; ++a)
            if (mask & (1u << a)) b.push_back(a);
        out.push_back(Observable::atom(AtomicObs({}, std::move(b))));
    }
    return out;
}

// All exact ready-set atoms, the empty set included.
std::vector<Observable> all_ready_atoms(std::uint32_t alpha) {
    std::vector<Observable> out;
    for (std::uint32_t mask = 0; mask < (1u << alpha); ++mask) {
        std::vector<ActionId> x;
        for (ActionId a = 0; a < alpha; ++a)
            if (mask & (1u << a)) x.push_back(a);
        out.push_back(ready_atom(std::move(x), alpha));
    }
    return out;
}

void enumerate_spines(const ObsFamily& fam, unsigned max_weight, unsigned max_conj_width,
                      Emitter& em) {
    // Trace-like families: diamond spines, a terminal decoration in place of
    // tt, and for the decorated families a decoration beside any step.
    const bool decorate_steps = decorated_family(fam.kind) && max_conj_width >= 2;
    std::vector<Observable> decorations;
    if (fam.kind != Family::Trace)
        decorations = refusal_family(fam.kind) ? refusal_atoms(fam.alphabet_size)
                                               : all_ready_atoms(fam.alphabet_size);

    // level = all family formulas of weight exactly w, ascending w.
    std::vector<Observable> level;
    level.push_back(Observable::top());
    level.insert(level.end(), decorations.begin(), decorations.end());
    for (unsigned w = 0; w <= max_weight; ++w) {
        if (w > 0) {
            std::vector<Observable> next;
            const std::size_t per_body = std::size_t(fam.alphabet_size) *
                                         (decorate_steps ? decorations.size() + 1 : 1);
            for (const Observable& body : level) {
                em.reserve(next.size() + per_body);
                for (ActionId a = 0; a < fam.alphabet_size; ++a) {
                    Observable step = Observable::diamond(a, body);
                    if (decorate_steps)
                        for (const Observable& d : decorations)
                            next.push_back(Observable::conj({d, step}));
                    next.push_back(std::move(step));
                }
            }
            level = std::move(next);
        }
        std::sort(level.begin(), level.end());
        em.reserve(level.size());
        for (const Observable& t : level) em.emit(t);
    }
}

void enumerate_simulation(const ObsFamily& fam, unsigned max_weight, unsigned max_conj_width,
                          Emitter& em) {
    // Weight-w layer: diamonds over any weight-(w-1) formula, plus flat
    // conjunctions of 2..width distinct diamonds of weight <= w with at
    // least one of weight exactly w. Nested conjunctions are not emitted;
    // they either canonicalize into this flat form or repeat a child.
    em.emit(Observable::top());
    std::vector<Observable> prev_level{Observable::top()};
    std::vector<Observable> diamond_pool;
    for (unsigned w = 1; w <= max_weight; ++w) {
        std::vector<Observable> fresh;
        em.reserve(prev_level.size() * fam.alphabet_size);
        for (const Observable& body : prev_level)
            for (ActionId a = 0; a < fam.alphabet_size; ++a)
                fresh.push_back(Observable::diamond(a, body));
        std::sort(fresh.begin(), fresh.end());
        fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());

        em.reserve(fresh.size());
        for (const Observable& d : fresh) em.emit(d);

        const std::size_t first_new = diamond_pool.size();
        diamond_pool.insert(diamond_pool.end(), fresh.begin(), fresh.end());

        std::vector<Observable> conjs;
        if (max_conj_width >= 2) {
            std::vector<std::size_t> pick;
            std::function<void(std::size_t, bool)> combos = [&](std::size_t start,
                                                                bool has_new) {
                if (pick.size() >= 2 && has_new) {
                    em.reserve(conjs.size() + 1);
                    std::vector<Observable> cs;
                    cs.reserve(pick.size());
                    for (std::size_t i : pick) cs.push_back(diamond_pool[i]);
                    conjs.push_back(canonical(Observable::conj(std::move(cs))));
                }
                if (pick.size() == max_conj_width) return;
                for (std::size_t i = start; i < diamond_pool.size(); ++i) {
                    pick.push_back(i);
                    combos(i + 1, has_new || i >= first_new);
                    pick.pop_back();
                }
            };
            combos(0, false);
            std::sort(conjs.begin(), conjs.end());
            em.reserve(conjs.size());
            // Emit copies: the conjunctions feed the next layer's diamond
            // bodies below.
            for (const Observable& t : conjs) em.emit(t);
        }

        // Diamond bodies for the next layer: everything of weight exactly w.
        prev_level = fresh;
        prev_level.insert(prev_level.end(), conjs.begin(), conjs.end());
    }
}

}  // namespace

std::vector<Observable> enumerate_family(const ObsFamily& fam, unsigned max_weight,
                                         unsigned max_conj_width, std::size_t cap) {
    if (fam.alphabet_size > 16)
        throw CapExceeded("formula enumeration supports alphabets of at most 16 actions");
    Emitter em(cap);
    if (fam.kind == Family::Simulation)
        enumerate_simulation(fam, max_weight, max_conj_width, em);
    else
        enumerate_spines(fam, max_weight, max_conj_width, em);
    return em.take();
}

Relation simulation_step(const Lts& lts, const Relation& x) {
    const std::uint32_t dim = lts.state_count();
    if (x.dim() != dim) throw Error("relation dimension does not match the system");
    Relation out(dim);
    for (StateId p = 0; p < dim; ++p) {
        for (StateId q = 0; q < dim; ++q) {
            bool ok = true;
            for (ActionId a : lts.enabled(p)) {
                const auto& qsucc = lts.successors(q, a);
                for (StateId pp : lts.successors(p, a)) {
                    bool matched = false;
                    for (StateId qq : qsucc)
                        if (x.contains(pp, qq)) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) out.add(p, q);
        }
    }
    return out;
}

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (std::uint64_t w : v) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

using StateMask = std::vector<std::uint64_t>;

// Shared machinery for the trace-like families: interned macro sets of
// right-hand states, per-action stepping, enabled-set survival tests.
class LinearGame {
public:
    LinearGame(const Lts& lts, Family fam, std::size_t pool_cap)
        : lts_(lts), fam_(fam), pool_cap_(pool_cap) {
        if (lts.action_count() > 64)
            throw CapExceeded("trace-like preorders support alphabets of at most 64 actions");
        words_ = (std::size_t(lts.state_count()) + 63) / 64;
        if (words_ == 0) words_ = 1;
        en_mask_.resize(lts.state_count());
        for (StateId p = 0; p < lts.state_count(); ++p) {
            std::uint64_t m = 0;
            for (ActionId a : lts.enabled(p)) m |= std::uint64_t(1) << a;
            en_mask_[p] = m;
        }
        succ_mask_.assign(std::size_t(lts.state_count()) * lts.action_count(),
                          StateMask(words_, 0));
        for (StateId p = 0; p < lts.state_count(); ++p)
            for (ActionId a = 0; a < lts.action_count(); ++a)
                for (StateId q : lts.successors(p, a))
                    succ_mask_[std::size_t(p) * lts.action_count() + a][q >> 6] |=
                        std::uint64_t(1) << (q & 63);
    }

    const Lts& lts() const { return lts_; }

    std::uint32_t intern(const StateMask& m) {
        auto [it, fresh] = ids_.try_emplace(m, static_cast<std::uint32_t>(sets_.size()));
        if (fresh) {
            if (sets_.size() >= pool_cap_)
                throw CapExceeded("powerset cap of " + std::to_string(pool_cap_) +
                                  " macro sets exceeded; the result is undecided at this scale");
            sets_.push_back(m);
        }
        return it->second;
    }

    std::uint32_t singleton(StateId q) {
        StateMask m(words_, 0);
        m[q >> 6] |= std::uint64_t(1) << (q & 63);
        return intern(m);
    }

    bool set_empty(std::uint32_t id) const {
        for (std::uint64_t w : sets_[id])
            if (w) return false;
        return true;
    }

    template <class F>
    void for_each_member(std::uint32_t id, F&& f) const {
        const StateMask& m = sets_[id];
        for (std::size_t w = 0; w < m.size(); ++w) {
            std::uint64_t bits = m[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                f(static_cast<StateId>(w * 64 + b));
            }
        }
    }

    // Does some member survive p's strongest terminal observation? Refusal
    // families keep q when en(q) ⊆ en(p), ready families when en(q) = en(p).
    bool has_survivor(std::uint32_t id, StateId p) const {
        bool found = false;
        for_each_member(id, [&](StateId q) { found = found || survives(q, p); });
        return found;
    }

    std::uint32_t filter(std::uint32_t id, StateId p) {
        StateMask out(words_, 0);
        for_each_member(id, [&](StateId q) {
            if (survives(q, p)) out[q >> 6] |= std::uint64_t(1) << (q & 63);
        });
        return intern(out);
    }

    std::uint32_t step(std::uint32_t id, ActionId a) {
        StateMask out(words_, 0);
        for_each_member(id, [&](StateId q) {
            const StateMask& s = succ_mask_[std::size_t(q) * lts_.action_count() + a];
            for (std::size_t w = 0; w < out.size(); ++w) out[w] |= s[w];
        });
        return intern(out);
    }

private:
    bool survives(StateId q, StateId p) const {
        const std::uint64_t en_q = en_mask_[q];
        const std::uint64_t en_p = en_mask_[p];
        return ready_family(fam_) ? en_q == en_p : (en_q & ~en_p) == 0;
    }

    const Lts& lts_;
    Family fam_;
    std::size_t pool_cap_;
    std::size_t words_;
    std::vector<std::uint64_t> en_mask_;
    std::vector<StateMask> succ_mask_;
    std::unordered_map<StateMask, std::uint32_t, VecHash> ids_;
    std::vector<StateMask> sets_;
};

// Bounded distinguishing game. fails(p, M, rem) holds exactly when some
// family observable of observation depth <= rem is satisfied by p and by no
// member of M. Verdicts are monotone in rem, which keeps the memo small:
// per (p, M) it stores the largest budget known to fail and the smallest
// known to succeed.
class BoundedGame {
public:
    BoundedGame(const Lts& lts, Family fam)
        : game_(lts, fam, std::size_t(1) << 26), fam_(fam) {}

    LinearGame& inner() { return game_; }

    bool fails(StateId p, std::uint32_t mid, unsigned rem) {
        Entry& e = memo_[(std::uint64_t(mid) << 32) | p];
        if (rem < e.false_below) return false;
        if (rem >= e.true_from) return true;
        const bool result = compute(p, mid, rem);
        // The map may rehash during compute; look the entry up again.
        Entry& e2 = memo_[(std::uint64_t(mid) << 32) | p];
        if (result)
            e2.true_from = std::min(e2.true_from, rem);
        else
            e2.false_below = std::max(e2.false_below, rem + 1);
        return result;
    }

private:
    struct Entry {
        unsigned false_below = 0;       // fails is false for every rem < this
        unsigned true_from = UINT_MAX;  // fails is true for every rem >= this
    };

    bool compute(StateId p, std::uint32_t mid, unsigned rem) {
        if (game_.set_empty(mid)) return true;
        if (rem == 0) return false;
        std::uint32_t base = mid;
        if (fam_ == Family::Failure || fam_ == Family::Ready) {
            if (!game_.has_survivor(mid, p)) return true;
        } else if (decorated_family(fam_)) {
            base = game_.filter(mid, p);
            if (game_.set_empty(base)) return true;
        }
        for (ActionId a : game_.lts().enabled(p)) {
            const std::uint32_t stepped = game_.step(base, a);
            for (StateId pp : game_.lts().successors(p, a))
                if (fails(pp, stepped, rem - 1)) return true;
        }
        return false;
    }

    LinearGame game_;
    Family fam_;
    std::unordered_map<std::uint64_t, Entry> memo_;
};

Relation approximant_linear(const Lts& lts, Family fam, unsigned n) {
    const std::uint32_t dim = lts.state_count();
    Relation out = Relation::full(dim);
    if (n == 0 || dim == 0) return out;
    BoundedGame game(lts, fam);
    for (StateId q = 0; q < dim; ++q) {
        const std::uint32_t start = game.inner().singleton(q);
        for (StateId p = 0; p < dim; ++p)
            if (game.fails(p, start, n)) out.remove(p, q);
    }
    return out;
}

Relation approximant_simulation(const Lts& lts, unsigned n) {
    Relation x = Relation::full(lts.state_count());
    for (unsigned i = 0; i < n; ++i) {
        Relation next = simulation_step(lts, x);
        if (next == x) break;
        x = std::move(next);
    }
    return x;
}

Relation preorder_linear(const Lts& lts, Family fam, std::size_t cap) {
    const std::uint32_t dim = lts.state_count();
    Relation out = Relation::full(dim);
    if (dim == 0) return out;

    LinearGame game(lts, fam, cap);

    // Forward construction of the full product graph, then a reverse sweep
    // from the nodes where the left side wins outright. A start (p, {q})
    // reaches such a node exactly when some family observable separates p
    // from q.
    struct Node {
        StateId p;
        std::uint32_t mid;
    };
    std::unordered_map<std::uint64_t, std::uint32_t> node_ids;
    std::vector<Node> nodes;
    std::vector<char> bad;
    std::vector<std::vector<std::uint32_t>> preds;
    std::deque<std::uint32_t> queue;

    auto node_of = [&](StateId p, std::uint32_t mid) -> std::uint32_t {
        const std::uint64_t key = (std::uint64_t(mid) << 32) | p;
        auto [it, fresh] = node_ids.try_emplace(key, static_cast<std::uint32_t>(nodes.size()));
        if (fresh) {
            nodes.push_back({p, mid});
            bad.push_back(0);
            preds.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };

    std::vector<std::uint32_t> starts(std::size_t(dim) * dim);
    for (StateId p = 0; p < dim; ++p)
        for (StateId q = 0; q < dim; ++q)
            starts[std::size_t(p) * dim + q] = node_of(p, game.singleton(q));

    while (!queue.empty()) {
        const std::uint32_t nid = queue.front();
        queue.pop_front();
        const StateId p = nodes[nid].p;
        const std::uint32_t mid = nodes[nid].mid;
        if (game.set_empty(mid)) {
            bad[nid] = 1;
            continue;
        }
        std::uint32_t base = mid;
        if (fam == Family::Failure || fam == Family::Ready) {
            if (!game.has_survivor(mid, p)) {
                bad[nid] = 1;
                continue;
            }
        } else if (decorated_family(fam)) {
            base = game.filter(mid, p);
            if (game.set_empty(base)) {
                bad[nid] = 1;
                continue;
            }
        }
        for (ActionId a : game.lts().enabled(p)) {
            const std::uint32_t stepped = game.step(base, a);
            for (StateId pp : game.lts().successors(p, a)) {
                const std::uint32_t child = node_of(pp, stepped);
                preds[child].push_back(nid);
            }
        }
    }

    std::deque<std::uint32_t> wave;
    std::vector<char> reaches(nodes.size(), 0);
    for (std::uint32_t i = 0; i < nodes.size(); ++i)
        if (bad[i]) {
            reaches[i] = 1;
            wave.push_back(i);
        }
    while (!wave.empty()) {
        const std::uint32_t nid = wave.front();
        wave.pop_front();
        for (std::uint32_t pred : preds[nid])
            if (!reaches[pred]) {
                reaches[pred] = 1;
                wave.push_back(pred);
            }
    }

    for (StateId p = 0; p < dim; ++p)
        for (StateId q = 0; q < dim; ++q)
            if (reaches[starts[std::size_t(p) * dim + q]]) out.remove(p, q);
    return out;
}

Relation preorder_simulation(const Lts& lts) {
    Relation x = Relation::full(lts.state_count());
    for (;;) {
        Relation next = simulation_step(lts, x);
        if (next == x) return x;
        x = std::move(next);
    }
}

}  // namespace

Relation approximant(const Lts& lts, Family fam, unsigned n) {
    if (fam == Family::Simulation) return approximant_simulation(lts, n);
    return approximant_linear(lts, fam, n);
}

Relation preorder(const Lts& lts, Family fam, std::size_t powerset_cap) {
    if (fam == Family::Simulation) return preorder_simulation(lts);
    return preorder_linear(lts, fam, powerset_cap);
}

Chain approximant_chain(const Lts& lts, Family fam, std::size_t powerset_cap) {
    const std::uint32_t dim = lts.state_count();
    if (fam == Family::Simulation) {
        return Chain::fixpoint_iteration(dim, [copy = lts](unsigned n) {
            return approximant(copy, Family::Simulation, n);
        });
    }
    return Chain::with_known_meet(
        dim, [copy = lts, fam](unsigned n) { return approximant(copy, fam, n); },
        [copy = lts, fam, powerset_cap]() { return preorder(copy, fam, powerset_cap); });
}

std::optional<ComplianceWitness> compliance_violation(const Lts& lts, const Relation& r,
                                                      Family fam) {
    if (r.dim() != lts.state_count()) throw Error("relation dimension does not match the system");
    if (fam == Family::Trace || fam == Family::Simulation) return std::nullopt;

    std::optional<ComplianceWitness> found;
    r.for_each([&](StateId p, StateId q) {
        if (found) return;
        const auto& en_p = lts.enabled(p);
        const auto& en_q = lts.enabled(q);
        if (refusal_family(fam)) {
            // p's refusals must transfer to q: nothing q enables may be
            // refused by p.
            for (ActionId a : en_q)
                if (!std::binary_search(en_p.begin(), en_p.end(), a)) {
                    found = ComplianceWitness{p, q, Observable::refusal(a)};
                    return;
                }
        } else if (en_p != en_q) {
            found = ComplianceWitness{p, q, ready_atom(en_p, lts.action_count())};
        }
    });
    return found;
}

namespace {

// Witness extraction for the trace-like families, guided by the memoized
// bounded game.
class WitnessBuilder {
public:
    WitnessBuilder(const Lts& lts, Family fam, unsigned n)
        : lts_(lts), fam_(fam), n_(n), game_(lts, fam) {}

    std::optional<Observable> build(StateId p, StateId q) {
        const std::uint32_t start = game_.inner().singleton(q);
        if (!game_.fails(p, start, n_)) return std::nullopt;
        return extract(p, start, n_);
    }

private:
    std::vector<ActionId> refused_actions(StateId p) const {
        std::vector<ActionId> out;
        const auto& en = lts_.enabled(p);
        for (ActionId a = 0; a < lts_.action_count(); ++a)
            if (!std::binary_search(en.begin(), en.end(), a)) out.push_back(a);
        return out;
    }

    // The strongest atom p satisfies: its full refusal set, or its exact
    // ready set.
    Observable terminal_atom(StateId p) const {
        if (refusal_family(fam_)) return Observable::atom(AtomicObs({}, refused_actions(p)));
        return ready_atom(lts_.enabled(p), lts_.action_count());
    }

    Observable extract(StateId p, std::uint32_t mid, unsigned rem) {
        LinearGame& g = game_.inner();
        if (g.set_empty(mid)) return Observable::top();
        // A failing node with a nonempty macro set spends at least one
        // observation, so rem >= 1 here.
        std::uint32_t base = mid;
        if (fam_ == Family::Failure || fam_ == Family::Ready) {
            if (!g.has_survivor(mid, p)) return terminal_atom(p);
        } else if (decorated_family(fam_)) {
            base = g.filter(mid, p);
            if (g.set_empty(base)) return terminal_atom(p);
        }
        for (ActionId a : lts_.enabled(p)) {
            const std::uint32_t stepped = g.step(base, a);
            for (StateId pp : lts_.successors(p, a)) {
                if (!game_.fails(pp, stepped, rem - 1)) continue;
                Observable rest = Observable::diamond(a, extract(pp, stepped, rem - 1));
                if (decorated_family(fam_)) {
                    Observable deco = terminal_atom(p);
                    const bool trivial =
                        refusal_family(fam_) && deco.atom_obs().must_not.empty();
                    if (!trivial)
                        return Observable::conj({std::move(deco), std::move(rest)});
                }
                return rest;
            }
        }
        throw std::logic_error("inconsistent distinguishing game state");
    }

    const Lts& lts_;
    Family fam_;
    unsigned n_;
    BoundedGame game_;
};

// One-step weakenings of a witness candidate.
std::vector<Observable> shrink_candidates(const Observable& t) {
    std::vector<Observable> out;
    switch (t.kind()) {
        case Observable::Kind::Atom: {
            const AtomicObs& a = t.atom_obs();
            if (a.must.empty() && a.must_not.size() > 1)
                for (ActionId b : a.must_not) out.push_back(Observable::refusal(b));
            break;
        }
        case Observable::Kind::Diamond:
            for (Observable& b : shrink_candidates(t.body()))
                out.push_back(Observable::diamond(t.action(), std::move(b)));
            break;
        case Observable::Kind::Conj: {
            const auto& cs = t.children();
            for (std::size_t i = 0; i < cs.size(); ++i) {
                std::vector<Observable> rest;
                for (std::size_t j = 0; j < cs.size(); ++j)
                    if (j != i) rest.push_back(cs[j]);
                out.push_back(rest.size() == 1 ? std::move(rest.front())
                                               : Observable::conj(std::move(rest)));
            }
            for (std::size_t i = 0; i < cs.size(); ++i)
                for (Observable& c : shrink_candidates(cs[i])) {
                    std::vector<Observable> copy = cs;
                    copy[i] = std::move(c);
                    out.push_back(Observable::conj(std::move(copy)));
                }
            break;
        }
    }
    return out;
}

Observable minimize_witness(const Lts& lts, StateId p, StateId q, Family fam, unsigned n,
                            Observable t) {
    const ObsFamily f(fam, lts);
    auto good = [&](const Observable& c) {
        return family_member(f, c) && observation_depth(c) <= n && sat(lts, p, c) &&
               !sat(lts, q, c);
    };
    bool improved = true;
    while (improved) {
        improved = false;
        for (Observable& c : shrink_candidates(t)) {
            if (good(c)) {
                t = std::move(c);
                improved = true;
                break;
            }
        }
    }
    return t;
}

Observable simulation_witness(const Lts& lts, StateId p, StateId q,
                              const std::vector<Relation>& iterates, unsigned k) {
    // (p, q) has left iterates[k] with k >= 1: some transition of p is
    // covered by no q-successor at level k-1. Each q-successor is then
    // separated at its own first failing level, strictly below k.
    for (ActionId a : lts.enabled(p)) {
        const auto& qsucc = lts.successors(q, a);
        for (StateId pp : lts.successors(p, a)) {
            bool unmatched = true;
            for (StateId qq : qsucc)
                if (iterates[k - 1].contains(pp, qq)) {
                    unmatched = false;
                    break;
                }
            if (!unmatched) continue;
            std::vector<Observable> children;
            for (StateId qq : qsucc) {
                unsigned j = 1;
                while (iterates[j].contains(pp, qq)) ++j;
                children.push_back(simulation_witness(lts, pp, qq, iterates, j));
            }
            return Observable::diamond(a, canonical(Observable::conj(std::move(children))));
        }
    }
    throw std::logic_error("inconsistent simulation iterate state");
}

}  // namespace

std::optional<Observable> distinguishing_observable(const Lts& lts, StateId p, StateId q,
                                                    Family fam, unsigned n) {
    if (p >= lts.state_count() || q >= lts.state_count()) throw Error("state out of range");

    std::optional<Observable> witness;
    if (fam == Family::Simulation) {
        std::vector<Relation> iterates;
        iterates.push_back(Relation::full(lts.state_count()));
        for (unsigned i = 1; i <= n; ++i)
            iterates.push_back(simulation_step(lts, iterates.back()));
        unsigned k = 1;
        while (k <= n && iterates[k].contains(p, q)) ++k;
        if (k > n) return std::nullopt;
        witness = simulation_witness(lts, p, q, iterates, k);
    } else {
        WitnessBuilder builder(lts, fam, n);
        witness = builder.build(p, q);
        if (!witness) return std::nullopt;
    }

    Observable minimized = minimize_witness(lts, p, q, fam, n, std::move(*witness));
    if (!sat(lts, p, minimized) || sat(lts, q, minimized) ||
        !family_member(ObsFamily(fam, lts), minimized) || observation_depth(minimized) > n)
        throw std::logic_error("distinguishing witness failed verification");
    return minimized;
}

}  // namespace uptoind
