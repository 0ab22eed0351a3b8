/*
   Copyright 2026 The Ethergy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ethergy {

/// A calendar day in UTC, stored as days since 1970-01-01.
class Date {
  public:
    Date() = default;

    static Date from_ymd(int year, int month, int day);

    /// Parses an ISO-8601 date (YYYY-MM-DD). Throws ValidationError otherwise.
    static Date parse(std::string_view iso);

    /// The UTC day containing the given Unix timestamp.
    static Date from_unix_seconds(std::int64_t seconds);

    static Date from_days(std::int64_t days) {
        Date d;
        d.days_ = days;
        return d;
    }

    std::string to_string() const;

    int year() const;
    int month() const;
    int day() const;
    std::int64_t days_since_epoch() const { return days_; }

    friend auto operator<=>(const Date&, const Date&) = default;

    Date operator+(std::int64_t days) const { return from_days(days_ + days); }
    Date operator-(std::int64_t days) const { return from_days(days_ - days); }
    std::int64_t operator-(const Date& other) const { return days_ - other.days_; }
    Date& operator++() {
        ++days_;
        return *this;
    }

  private:
    std::int64_t days_{0};
};

/// Ethereum mainnet genesis day, the origin of the efficiency time axis.
inline const Date kGenesisDate = Date::from_ymd(2015, 7, 30);

}  // namespace ethergy
