#pragma once

// Deterministic serialization: CSV with 17-significant-digit scientific
// notation and LF line endings, and a minimal JSON writer with sorted keys
// and the same float formatting (bit-exact reproducibility is part of the
// output contract, so the float text is produced by one code path).

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mtcav/errors.hpp"

namespace mtcav {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot open output file: " + path);
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ",";
            out_ << header[i];
        }
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ",";
            out_ << format_double(values[i]);
        }
        out_ << "\n";
    }

    // Mixed row: the first cell is verbatim text (e.g. a swept key value).
    void row(const std::string& first, const std::vector<double>& values) {
        out_ << first;
        for (double v : values) out_ << "," << format_double(v);
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

class Json {
public:
    using Object = std::map<std::string, Json>; // sorted keys by construction
    using Array = std::vector<Json>;

    Json() : v_(nullptr) {}
    Json(std::nullptr_t) : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(double d) : v_(d) {}
    Json(int i) : v_(static_cast<long long>(i)) {}
    Json(long long i) : v_(i) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}
    Json(Array a) : v_(std::move(a)) {}
    Json(Object o) : v_(std::move(o)) {}

    Json& operator[](const std::string& key) {
        if (!std::holds_alternative<Object>(v_)) v_ = Object{};
        return std::get<Object>(v_)[key];
    }

    void push_back(Json j) {
        if (!std::holds_alternative<Array>(v_)) v_ = Array{};
        std::get<Array>(v_).push_back(std::move(j));
    }

    std::string dump(int indent = 0) const {
        std::string out;
        write(out, indent, 0);
        if (indent > 0) out += "\n";
        return out;
    }

private:
    static void escape(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default: out += c;
            }
        }
        out += '"';
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad = indent > 0 ? std::string(static_cast<size_t>(indent * (depth + 1)), ' ') : "";
        const std::string padc = indent > 0 ? std::string(static_cast<size_t>(indent * depth), ' ') : "";
        const char* nl = indent > 0 ? "\n" : "";
        if (std::holds_alternative<std::nullptr_t>(v_)) {
            out += "null";
        } else if (std::holds_alternative<bool>(v_)) {
            out += std::get<bool>(v_) ? "true" : "false";
        } else if (std::holds_alternative<long long>(v_)) {
            out += std::to_string(std::get<long long>(v_));
        } else if (std::holds_alternative<double>(v_)) {
            out += format_double(std::get<double>(v_));
        } else if (std::holds_alternative<std::string>(v_)) {
            escape(out, std::get<std::string>(v_));
        } else if (std::holds_alternative<Array>(v_)) {
            const auto& a = std::get<Array>(v_);
            if (a.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            for (size_t i = 0; i < a.size(); ++i) {
                out += nl;
                out += pad;
                a[i].write(out, indent, depth + 1);
                if (i + 1 < a.size()) out += ",";
            }
            out += nl;
            out += padc;
            out += "]";
        } else {
            const auto& o = std::get<Object>(v_);
            if (o.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            size_t i = 0;
            for (const auto& [k, val] : o) {
                out += nl;
                out += pad;
                escape(out, k);
                out += indent > 0 ? ": " : ":";
                val.write(out, indent, depth + 1);
                if (++i < o.size()) out += ",";
            }
            out += nl;
            out += padc;
            out += "}";
        }
    }

    std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> v_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
}

} // namespace mtcav
