/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/basic.hpp"

namespace castnorm {

// Nested zero/one/bit0/bit1 spelling of a nonnegative numeral
// (bit0 x = x + x, bit1 x = bit0 x + 1). Used only for trace annotation.
inline std::string numeral_binary_view(const BigInt& v) {
    if (v < 0) throw Error("binary view of a negative value");
    if (v == 0) return "zero";
    if (v == 1) return "one";
    std::string inner = numeral_binary_view(v / 2);
    return (v % 2 == 0 ? "bit0(" : "bit1(") + inner + ")";
}

// Evaluates a binary-view spelling back to its value; the round-trip inverse
// of numeral_binary_view.
inline BigInt binary_view_value(const std::string& s) {
    struct P {
        const std::string& s;
        size_t pos = 0;

        BigInt parse() {
            if (s.compare(pos, 4, "zero") == 0) {
                pos += 4;
                return 0;
            }
            if (s.compare(pos, 3, "one") == 0) {
                pos += 3;
                return 1;
            }
            bool odd;
            if (s.compare(pos, 5, "bit0(") == 0) {
                odd = false;
            } else if (s.compare(pos, 5, "bit1(") == 0) {
                odd = true;
            } else {
                throw Error("malformed binary view '" + s + "'");
            }
            pos += 5;
            BigInt inner = parse();
            if (pos >= s.size() || s[pos] != ')') throw Error("malformed binary view '" + s + "'");
            ++pos;
            return inner * 2 + (odd ? 1 : 0);
        }
    };
    P p{s};
    BigInt v = p.parse();
    if (p.pos != s.size()) throw Error("malformed binary view '" + s + "'");
    return v;
}

} // namespace castnorm
