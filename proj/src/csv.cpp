#include "sumrate/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace sumrate {

std::string format_g9(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    if (ec != std::errc{}) throw std::runtime_error("format_g9: conversion failed");
    return std::string(buf, ptr);
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

}  // namespace sumrate
