#pragma once

#include <concepts>
#include <string>
#include <string_view>

namespace qca {

/// Numbers with 17 significant digits; non-finite values become null.
std::string format_number(double value);

/// One flat JSON object on one line. Keys keep insertion order.
class Record {
public:
    explicit Record(std::string_view kind);

    Record& add(std::string_view key, double value);
    Record& add(std::string_view key, bool value);
    Record& add(std::string_view key, std::string_view value);
    Record& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }
    Record& add(std::string_view key, const std::string& value) { return add(key, std::string_view(value)); }
    template <std::integral T>
    Record& add(std::string_view key, T value) {
        return raw(key, std::to_string(value));
    }
    Record& add_null(std::string_view key) { return raw(key, "null"); }

    std::string str() const { return body_ + "}"; }

private:
    Record& raw(std::string_view key, std::string_view json);
    std::string body_;
};

}  // namespace qca
