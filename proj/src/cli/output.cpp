#include "pmpy/cli/output.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pmpy::cli {

std::string format_number(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.16e}", x);
}

namespace {

void dump(const Json &j, int indent, std::string &out) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto &item : j.items()) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad + Json(item.key()).dump() + ": ";
            dump(item.value(), indent + 2, out);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i > 0)
                out += ",\n";
            out += pad;
            dump(j[i], indent + 2, out);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        out += std::isfinite(x) ? format_number(x) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

std::string dump_json(const Json &j) {
    std::string out;
    dump(j, 0, out);
    out += "\n";
    return out;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { line(header); }

void CsvWriter::row(const std::vector<std::string> &fields) {
    if (fields.size() != width_)
        throw std::logic_error("csv row has " + std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(width_));
    line(fields);
    ++rows_;
}

void CsvWriter::line(const std::vector<std::string> &fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0)
            text_ += ',';
        text_ += csv_field(fields[i]);
    }
    text_ += '\n';
}

std::string trajectory_csv(const std::vector<TrajectorySample> &samples) {
    CsvWriter csv({"t", "ell", "v", "a1", "a2", "X", "P", "E_cum"});
    for (const TrajectorySample &s : samples)
        csv.row({format_number(s.t), format_number(s.ell), format_number(s.v), format_number(s.a1),
                 format_number(s.a2), format_number(s.X), format_number(s.P), format_number(s.E_cum)});
    return csv.str();
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace pmpy::cli
