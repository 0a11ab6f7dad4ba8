#include "fseg/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fseg::csv {

namespace {

enum class State { FieldStart, Unquoted, Quoted, QuoteInQuoted };

struct Parser {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> current;
    std::string field;
    State state = State::FieldStart;
    bool record_open = false;
    bool unterminated_quote = false;

    void push_field() {
        current.push_back(std::move(field));
        field.clear();
    }

    void end_record() {
        if (!record_open && current.empty() && field.empty()) return;  // blank line
        push_field();
        records.push_back(std::move(current));
        current.clear();
        record_open = false;
        state = State::FieldStart;
    }

    void feed(char c) {
        switch (state) {
            case State::FieldStart:
                if (c == '"') {
                    state = State::Quoted;
                    record_open = true;
                } else if (c == ',') {
                    push_field();
                    record_open = true;
                } else if (c == '\n') {
                    end_record();
                } else if (c == '\r') {
                    // swallowed; the matching '\n' closes the record
                } else {
                    field.push_back(c);
                    state = State::Unquoted;
                    record_open = true;
                }
                break;
            case State::Unquoted:
                if (c == ',') {
                    push_field();
                    state = State::FieldStart;
                } else if (c == '\n') {
                    end_record();
                } else if (c == '\r') {
                    // dropped only directly before newline; keep otherwise
                    field.push_back(c);
                } else {
                    field.push_back(c);
                }
                break;
            case State::Quoted:
                if (c == '"') {
                    state = State::QuoteInQuoted;
                } else {
                    field.push_back(c);
                }
                break;
            case State::QuoteInQuoted:
                if (c == '"') {
                    field.push_back('"');
                    state = State::Quoted;
                } else if (c == ',') {
                    push_field();
                    state = State::FieldStart;
                } else if (c == '\n') {
                    end_record();
                } else if (c == '\r') {
                    // wait for '\n'
                } else {
                    // stray text after closing quote; keep it rather than abort
                    field.push_back(c);
                    state = State::Unquoted;
                }
                break;
        }
    }

    void finish() {
        if (state == State::Quoted) unterminated_quote = true;
        if (record_open || !field.empty() || !current.empty()) {
            push_field();
            records.push_back(std::move(current));
        }
    }
};

void strip_trailing_cr(std::vector<std::string>& row) {
    for (auto& f : row) {
        if (!f.empty() && f.back() == '\r') f.pop_back();
    }
}

}  // namespace

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

Table read_stream(std::istream& in) {
    Parser p;
    char c;
    bool first = true;
    while (in.get(c)) {
        if (first) {
            first = false;
            // UTF-8 BOM
            if (static_cast<unsigned char>(c) == 0xEF) {
                char b2 = 0, b3 = 0;
                if (in.get(b2) && in.get(b3) && static_cast<unsigned char>(b2) == 0xBB &&
                    static_cast<unsigned char>(b3) == 0xBF) {
                    continue;
                }
                // not a BOM after all; extremely unlikely in practice
                p.feed(c);
                if (b2) p.feed(b2);
                if (b3) p.feed(b3);
                continue;
            }
        }
        p.feed(c);
    }
    p.finish();

    Table t;
    if (p.records.empty()) return t;

    strip_trailing_cr(p.records.front());
    t.header = std::move(p.records.front());

    for (std::size_t i = 1; i < p.records.size(); ++i) {
        auto& row = p.records[i];
        strip_trailing_cr(row);
        std::size_t record_no = i;  // 1-based among data rows
        bool last = (i + 1 == p.records.size());
        if (last && p.unterminated_quote) {
            t.errors.push_back({record_no, "unterminated quoted field"});
            continue;
        }
        if (row.size() != t.header.size()) {
            std::ostringstream os;
            os << "expected " << t.header.size() << " fields, got " << row.size();
            t.errors.push_back({record_no, os.str()});
            continue;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("csv: cannot open " + path.string());
    return read_stream(in);
}

std::string escape_field(const std::string& field) {
    bool needs_quote = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape_field(fields[i]);
    }
    out << '\n';
}

}  // namespace fseg::csv
