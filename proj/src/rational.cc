// Copyright 2026 The ldpq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldpq/rational.h"

#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace ldpq {
namespace {

__int128 Gcd(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool FitsInt64(__int128 v) {
  return v >= std::numeric_limits<int64_t>::min() &&
         v <= std::numeric_limits<int64_t>::max();
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) std::abort();
  *this = FromWide(num, den);
}

Rational Rational::FromWide(__int128 num, __int128 den) {
  if (den == 0) std::abort();
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = Gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!FitsInt64(num) || !FitsInt64(den)) std::abort();
  Rational r;
  r.num_ = static_cast<int64_t>(num);
  r.den_ = static_cast<int64_t>(den);
  return r;
}

absl::StatusOr<Rational> Rational::Parse(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  if (text.empty()) {
    return absl::InvalidArgumentError("empty rational");
  }
  if (auto slash = text.find('/'); slash != absl::string_view::npos) {
    int64_t num = 0;
    int64_t den = 0;
    if (!absl::SimpleAtoi(text.substr(0, slash), &num) ||
        !absl::SimpleAtoi(text.substr(slash + 1), &den) || den == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed fraction '", text, "'"));
    }
    return Rational(num, den);
  }

  // Decimal with optional exponent: mantissa digits scaled by a power of 10.
  int64_t exponent = 0;
  absl::string_view mantissa = text;
  if (auto e = text.find_first_of("eE"); e != absl::string_view::npos) {
    if (!absl::SimpleAtoi(text.substr(e + 1), &exponent)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed exponent in '", text, "'"));
    }
    mantissa = text.substr(0, e);
  }
  bool negative = absl::ConsumePrefix(&mantissa, "-");
  if (!negative) absl::ConsumePrefix(&mantissa, "+");
  std::string digits;
  int64_t frac_digits = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed decimal '", text, "'"));
    }
  }
  if (digits.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed decimal '", text, "'"));
  }
  const int64_t scale = frac_digits - exponent;
  if (digits.size() > 18 || scale > 18 || scale < -18) {
    return absl::OutOfRangeError(
        absl::StrCat("decimal '", text, "' exceeds int64 precision"));
  }
  int64_t value = 0;
  if (!absl::SimpleAtoi(digits, &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed decimal '", text, "'"));
  }
  if (negative) value = -value;
  __int128 num = value;
  __int128 den = 1;
  for (int64_t i = 0; i < (scale > 0 ? scale : -scale); ++i) {
    if (scale > 0) {
      den *= 10;
    } else {
      num *= 10;
    }
  }
  const __int128 g = Gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!FitsInt64(num) || !FitsInt64(den)) {
    return absl::OutOfRangeError(
        absl::StrCat("decimal '", text, "' exceeds int64 precision"));
  }
  return Rational(static_cast<int64_t>(num), static_cast<int64_t>(den));
}

std::string Rational::ToString() const {
  if (den_ == 1) return absl::StrCat(num_);
  return absl::StrCat(num_, "/", den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::FromWide(static_cast<__int128>(a.num_) * b.den_ +
                                static_cast<__int128>(b.num_) * a.den_,
                            static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::FromWide(static_cast<__int128>(a.num_) * b.num_,
                            static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::FromWide(static_cast<__int128>(a.num_) * b.den_,
                            static_cast<__int128>(a.den_) * b.num_);
}

Rational Abs(const Rational& r) { return r.num() < 0 ? -r : r; }

}  // namespace ldpq
