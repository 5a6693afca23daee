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

#ifndef UPTOIND_TESTS_FIXTURES_HPP
#define UPTOIND_TESTS_FIXTURES_HPP

#include <string>
#include <utility>

#include "uptoind/lts.hpp"

namespace uptoind::testfix {

// The running pair of systems: kL1 does a then b, or a then c, deciding at
// the first step; kL2 does a and only then decides. Trace-equivalent,
// separated by every finer preorder.
inline const std::string kL1 =
    "des (0,4,5)\n"
    "(0,\"a\",1)\n"
    "(1,\"b\",2)\n"
    "(0,\"a\",3)\n"
    "(3,\"c\",4)\n";

inline const std::string kL2 =
    "des (0,3,4)\n"
    "(0,\"a\",1)\n"
    "(1,\"b\",2)\n"
    "(1,\"c\",3)\n";

// L1 next to L2; states named s0..s4 and t0..t3.
inline std::pair<Lts, StateId> l1_beside_l2() {
    return disjoint_union(parse_aut(kL1), parse_aut(kL2));
}

}  // namespace uptoind::testfix

#endif
