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

#include "uptoind/lattice.hpp"

#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uptoind/errors.hpp"

namespace uptoind {

Relation lattice_top(std::uint32_t dim) { return Relation::full(dim); }
Relation lattice_bottom(std::uint32_t dim) { return Relation::empty(dim); }

Relation lattice_join(const std::vector<Relation>& rs, std::uint32_t dim) {
    Relation out = Relation::empty(dim);
    for (const Relation& r : rs) {
        if (r.dim() != dim) throw Error("join over mixed dimensions");
        out |= r;
    }
    return out;
}

Relation lattice_meet(const std::vector<Relation>& rs, std::uint32_t dim) {
    Relation out = Relation::full(dim);
    for (const Relation& r : rs) {
        if (r.dim() != dim) throw Error("meet over mixed dimensions");
        out &= r;
    }
    return out;
}

namespace {

enum class Evidence { Plain, DeclaredStable, FixpointIteration, KnownMeet };

}  // namespace

struct Chain::Impl {
    std::uint32_t dim;
    Generator gen;
    Evidence evidence = Evidence::Plain;
    unsigned declared_index = 0;
    std::function<Relation()> meet_fn;

    mutable std::mutex mu;
    mutable std::deque<Relation> memo;
    mutable std::optional<Relation> known_meet;

    // Requires mu. Extends the memo through level n, checking the chain
    // conditions as it goes.
    void extend(unsigned n) const {
        while (memo.size() <= n) {
            const unsigned level = static_cast<unsigned>(memo.size());
            Relation r = gen(level);
            if (r.dim() != dim) throw ChainError("chain level has the wrong dimension");
            if (level == 0) {
                if (!(r == Relation::full(dim)))
                    throw ChainError("chain does not start at the full relation");
            } else if (!r.subset_of(memo.back())) {
                throw ChainError("chain level " + std::to_string(level) +
                                 " is not contained in its predecessor");
            }
            memo.push_back(std::move(r));
        }
    }

    const Relation& meet() const {
        if (!known_meet) known_meet = meet_fn();
        return *known_meet;
    }
};

Chain Chain::plain(std::uint32_t dim, Generator gen) {
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->gen = std::move(gen);
    impl->evidence = Evidence::Plain;
    return Chain(std::move(impl));
}

Chain Chain::declared_stable(std::uint32_t dim, Generator gen, unsigned index) {
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->gen = std::move(gen);
    impl->evidence = Evidence::DeclaredStable;
    impl->declared_index = index;
    return Chain(std::move(impl));
}

Chain Chain::fixpoint_iteration(std::uint32_t dim, Generator gen) {
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->gen = std::move(gen);
    impl->evidence = Evidence::FixpointIteration;
    return Chain(std::move(impl));
}

Chain Chain::with_known_meet(std::uint32_t dim, Generator gen, std::function<Relation()> meet) {
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->gen = std::move(gen);
    impl->evidence = Evidence::KnownMeet;
    impl->meet_fn = std::move(meet);
    return Chain(std::move(impl));
}

std::uint32_t Chain::dim() const { return impl_->dim; }

const Relation& Chain::at(unsigned n) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->extend(n);
    return impl_->memo[n];
}

std::optional<unsigned> Chain::stabilization_index(unsigned probe) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    Impl& im = *impl_;

    // An empty level is the meet no matter what the evidence says.
    im.extend(probe);
    for (unsigned i = 0; i <= probe; ++i)
        if (im.memo[i] == Relation::empty(im.dim)) return i;

    switch (im.evidence) {
        case Evidence::Plain:
            return std::nullopt;
        case Evidence::DeclaredStable: {
            if (im.declared_index > probe) return std::nullopt;
            // Spot-check the declaration before trusting it.
            im.extend(im.declared_index + 1);
            if (!(im.memo[im.declared_index] == im.memo[im.declared_index + 1]) ||
                !(im.memo[im.declared_index] == im.memo[probe]))
                throw ChainError("chain declared stable at " +
                                 std::to_string(im.declared_index) + " but keeps moving");
            return im.declared_index;
        }
        case Evidence::FixpointIteration: {
            // Iterating a monotone function from the top: the first repeat
            // is the greatest fixed point, hence the meet.
            im.extend(probe + 1);
            for (unsigned i = 0; i <= probe; ++i)
                if (im.memo[i] == im.memo[i + 1]) return i;
            return std::nullopt;
        }
        case Evidence::KnownMeet: {
            const Relation& m = im.meet();
            for (unsigned i = 0; i <= probe; ++i)
                if (im.memo[i] == m) return i;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

bool Chain::has_meet_evidence() const { return impl_->evidence != Evidence::Plain; }

MeetResult meet_of_chain(const Chain& c, unsigned budget) {
    if (auto s = c.stabilization_index(budget))
        return MeetResult{c.at(*s), true, *s};
    if (c.has_meet_evidence()) {
        // A chain with an on-demand meet is exact even when no level within
        // the budget has reached it.
        std::lock_guard<std::mutex> lock(c.impl_->mu);
        if (c.impl_->evidence == Evidence::KnownMeet)
            return MeetResult{c.impl_->meet(), true, budget};
    }
    return MeetResult{c.at(budget), false, budget};
}

RelEndo RelEndo::identity() {
    return RelEndo{"id", [](const Relation& r) { return r; }, true};
}

RelEndo RelEndo::constant(std::string name, Relation value) {
    return RelEndo{std::move(name),
                   [value = std::move(value)](const Relation&) { return value; }, true};
}

RelEndo compose(const RelEndo& b, const RelEndo& f) {
    return RelEndo{"comp(" + b.name + ", " + f.name + ")",
                   [b, f](const Relation& r) { return b(f(r)); },
                   b.declared_monotone && f.declared_monotone};
}

bool is_post_fixed(const RelEndo& b, const Relation& z) { return z.subset_of(b(z)); }

namespace {

Relation random_subset(const Relation& of, std::mt19937_64& rng) {
    Relation out = Relation::empty(of.dim());
    of.for_each([&](StateId p, StateId q) {
        if (rng() & 1) out.add(p, q);
    });
    return out;
}

void probe_monotonicity(const RelEndo& f, std::uint32_t dim, const CheckOptions& opts) {
    if (!f.declared_monotone || opts.monotonicity_probes == 0) return;
    std::mt19937_64 rng(opts.seed ^ 0x6d6f6e6f746f6e65ull);
    const Relation top = Relation::full(dim);
    for (unsigned i = 0; i < opts.monotonicity_probes; ++i) {
        Relation big = random_subset(top, rng);
        Relation small = random_subset(big, rng);
        if (!f(small).subset_of(f(big)))
            throw MonotonicityError("function '" + f.name +
                                    "' is declared monotone but is not: its image shrank on a "
                                    "sampled pair of nested relations");
    }
}

// Core of check_valid and check_ap: at each level n, for y ⊆ x_n the image
// f(y) must land in the target level (x_{n+1} for validity, x_n otherwise).
CheckReport run_check(const RelEndo& f, const Chain& c, unsigned n_max, const CheckOptions& opts,
                      std::string property, bool target_is_next) {
    probe_monotonicity(f, c.dim(), opts);

    CheckReport report;
    report.function_name = f.name;
    report.property = std::move(property);
    report.n_max = n_max;
    report.mode = f.declared_monotone ? CheckMode::Monotone : CheckMode::RawExhaustive;
    report.passed = true;

    for (unsigned n = 0; n <= n_max; ++n) {
        const Relation& level = c.at(n);
        const Relation& target = target_is_next ? c.at(n + 1) : c.at(n);
        LevelVerdict v{n, true, 0, std::nullopt};

        if (f.declared_monotone) {
            // Monotone f: the largest y suffices.
            Relation image = f(level);
            v.checked_subsets = 1;
            if (!image.subset_of(target)) {
                v.ok = false;
                v.witness = image.first_not_in(target);
            }
        } else {
            const auto pairs = level.pairs();
            const bool exhaustive =
                pairs.size() < 64 && (std::size_t(1) << pairs.size()) <= opts.exhaustive_limit;
            auto check_subset = [&](const Relation& y) {
                if (!v.ok) return;
                ++v.checked_subsets;
                Relation image = f(y);
                if (!image.subset_of(target)) {
                    v.ok = false;
                    v.witness = image.first_not_in(target);
                }
            };
            if (exhaustive) {
                for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << pairs.size()); ++mask) {
                    Relation y = Relation::empty(c.dim());
                    for (std::size_t i = 0; i < pairs.size(); ++i)
                        if (mask & (std::uint64_t(1) << i)) y.add(pairs[i].first, pairs[i].second);
                    check_subset(y);
                    if (!v.ok) break;
                }
            } else {
                report.mode = CheckMode::RawSampled;
                check_subset(level);
                check_subset(Relation::empty(c.dim()));
                std::mt19937_64 rng(opts.seed ^ (0x9e3779b97f4a7c15ull * (n + 1)));
                for (unsigned s = 0; s < opts.samples_per_level && v.ok; ++s)
                    check_subset(random_subset(level, rng));
            }
        }

        if (!v.ok) report.passed = false;
        report.levels.push_back(std::move(v));
    }

    // Once the chain provably stabilizes inside the bound, every later level
    // repeats a checked one and the verdict covers all n.
    try {
        report.stabilization_index = c.stabilization_index(n_max);
    } catch (const CapExceeded&) {
        report.stabilization_index = std::nullopt;
    }
    report.total = report.passed && report.stabilization_index.has_value();
    return report;
}

const char* mode_name(CheckMode m) {
    switch (m) {
        case CheckMode::Monotone: return "monotone";
        case CheckMode::RawExhaustive: return "raw-exhaustive";
        case CheckMode::RawSampled: return "raw-sampled";
    }
    return "?";
}

}  // namespace

CheckReport check_valid(const RelEndo& b, const Chain& c, unsigned n_max,
                        const CheckOptions& opts) {
    return run_check(b, c, n_max, opts, "valid", true);
}

CheckReport check_ap(const RelEndo& f, const Chain& c, unsigned n_max, const CheckOptions& opts) {
    return run_check(f, c, n_max, opts, "ap", false);
}

std::string CheckReport::to_text() const {
    std::ostringstream os;
    os << property << " check of '" << function_name << "' up to level " << n_max << " ["
       << mode_name(mode) << "]: " << (passed ? "pass" : "FAIL");
    if (total)
        os << " (total: chain stable at level " << *stabilization_index << ")";
    else
        os << " (bounded)";
    os << "\n";
    for (const LevelVerdict& v : levels) {
        os << "  level " << v.level << ": " << (v.ok ? "ok" : "violated") << ", "
           << v.checked_subsets << " subset(s)";
        if (v.witness) os << ", escaped pair (" << v.witness->first << ", " << v.witness->second << ")";
        os << "\n";
    }
    return os.str();
}

std::string CheckReport::to_json_lines() const {
    std::ostringstream os;
    nlohmann::json head{{"schema", "uptoind.check.v1"},
                        {"function", function_name},
                        {"property", property},
                        {"n_max", n_max},
                        {"mode", mode_name(mode)},
                        {"passed", passed},
                        {"total", total}};
    if (stabilization_index)
        head["stabilization_index"] = *stabilization_index;
    else
        head["stabilization_index"] = nullptr;
    os << head.dump() << "\n";
    for (const LevelVerdict& v : levels) {
        nlohmann::json line{{"level", v.level}, {"ok", v.ok}, {"checked_subsets", v.checked_subsets}};
        if (v.witness)
            line["witness"] = {v.witness->first, v.witness->second};
        else
            line["witness"] = nullptr;
        os << line.dump() << "\n";
    }
    return os.str();
}

BelowMeetReport certify_below_meet(const RelEndo& b, const Relation& z, const Chain& c,
                                   unsigned n_max, const CheckOptions& opts) {
    probe_monotonicity(b, c.dim(), opts);

    BelowMeetReport report;
    report.n_max = n_max;
    if (z.dim() != c.dim()) throw Error("relation dimension does not match the chain");

    Relation bz = b(z);
    if (!z.subset_of(bz)) {
        report.failure = "z is not a post-fixed point: z is not contained in b(z)";
        report.witness = z.first_not_in(bz);
        return report;
    }

    // z ⊆ x_0 = top; from z ⊆ x_n, validity instantiated at y = z gives
    // b(z) ⊆ x_{n+1}, and z ⊆ b(z) pushes z below the next level. Both
    // inclusions are checked directly, level by level.
    for (unsigned n = 0; n <= n_max; ++n) {
        BelowMeetStep step{n, true, true};
        if (!z.subset_of(c.at(n))) {
            step.z_below_level = false;
            report.steps.push_back(step);
            report.failure = "z escapes chain level " + std::to_string(n);
            report.witness = z.first_not_in(c.at(n));
            return report;
        }
        if (!bz.subset_of(c.at(n + 1))) {
            step.bz_below_next = false;
            report.steps.push_back(step);
            report.failure = "b(z) escapes chain level " + std::to_string(n + 1) +
                             "; the function is not valid for this chain at y = z";
            report.witness = bz.first_not_in(c.at(n + 1));
            return report;
        }
        report.steps.push_back(step);
    }

    report.certified = true;
    return report;
}

std::string BelowMeetReport::to_text() const {
    std::ostringstream os;
    os << "below-meet certificate up to level " << n_max << ": "
       << (certified ? "certified" : "REFUTED") << "\n";
    if (!failure.empty()) os << "  failure: " << failure << "\n";
    if (witness) os << "  witness pair: (" << witness->first << ", " << witness->second << ")\n";
    for (const BelowMeetStep& s : steps)
        os << "  level " << s.level << ": z below level: " << (s.z_below_level ? "yes" : "no")
           << ", b(z) below next: " << (s.bz_below_next ? "yes" : "no") << "\n";
    return os.str();
}

std::string BelowMeetReport::to_json_lines() const {
    std::ostringstream os;
    nlohmann::json head{{"schema", "uptoind.below_meet.v1"},
                        {"certified", certified},
                        {"n_max", n_max},
                        {"failure", failure}};
    if (witness)
        head["witness"] = {witness->first, witness->second};
    else
        head["witness"] = nullptr;
    os << head.dump() << "\n";
    for (const BelowMeetStep& s : steps) {
        nlohmann::json line{{"level", s.level},
                            {"z_below_level", s.z_below_level},
                            {"bz_below_next", s.bz_below_next}};
        os << line.dump() << "\n";
    }
    return os.str();
}

}  // namespace uptoind
