#include "qca/chain.hpp"

#include <algorithm>
#include <sstream>

#include "qca/error.hpp"

namespace qca {

std::string band_dump(const ChainConfiguration& config) {
    std::string out;
    for (std::size_t i = 0; i < config.program.size(); ++i) {
        if (i != 0) {
            out += ' ';
        }
        out += token(config.program[i]);
    }
    out += '\n';
    for (std::size_t i = 0; i < config.data.size(); ++i) {
        if (i != 0) {
            out += ' ';
        }
        out += token(config.data[i]);
    }
    out += '\n';
    return out;
}

ChainConfiguration parse_band_dump(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string program_line;
    std::string data_line;
    if (!std::getline(in, program_line) || !std::getline(in, data_line)) {
        throw ParseError(0, "band dump needs a program line and a data line");
    }
    ChainConfiguration config;
    std::istringstream p(program_line);
    for (std::string tok; p >> tok;) {
        config.program.push_back(parse_program_token(tok));
    }
    std::istringstream d(data_line);
    for (std::string tok; d >> tok;) {
        config.data.push_back(parse_data_token(tok));
    }
    if (config.program.size() != config.data.size()) {
        throw ParseError(0, "program band has " + std::to_string(config.program.size()) + " cells but data band has " +
                                std::to_string(config.data.size()));
    }
    return config;
}

std::string program_code(const ChainConfiguration& config) {
    std::size_t first = config.program.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < config.program.size(); ++i) {
        if (config.program[i] != ProgramSymbol::Blank) {
            first = std::min(first, i);
            last = i;
        }
    }
    std::string out;
    for (std::size_t i = first; i <= last && i < config.program.size(); ++i) {
        if (!out.empty()) {
            out += ' ';
        }
        out += token(config.program[i]);
    }
    return out;
}

}  // namespace qca
