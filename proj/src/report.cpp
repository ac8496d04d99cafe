#include "qca/report.hpp"

#include <cmath>

#include <fmt/format.h>
#include "json.hpp"

namespace qca {

std::string format_number(double value) {
    if (!std::isfinite(value)) {
        return "null";
    }
    return fmt::format("{:.17g}", value);
}

Record::Record(std::string_view kind) : body_("{") { add("record", kind); }

Record& Record::add(std::string_view key, double value) { return raw(key, format_number(value)); }

Record& Record::add(std::string_view key, bool value) { return raw(key, value ? "true" : "false"); }

Record& Record::add(std::string_view key, std::string_view value) {
    return raw(key, nlohmann::json(std::string(value)).dump());
}

Record& Record::raw(std::string_view key, std::string_view json) {
    if (body_.size() > 1) {
        body_ += ',';
    }
    body_ += nlohmann::json(std::string(key)).dump();
    body_ += ':';
    body_ += json;
    return *this;
}

}  // namespace qca
