#include "ordreg/results.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace ordreg {

namespace {

constexpr const char* kFailedCell = "—"; // em dash
constexpr const char* kPlusMinus = "±";

constexpr const char* kCsvHeader =
    "encoding,classifier,unweighted_kappa,unweighted_rank,"
    "linear_kappa,linear_rank,quadratic_kappa,quadratic_rank";

const std::array<Weighting, kWeightingCount> kWeightings = {
    Weighting::Unweighted, Weighting::Linear, Weighting::Quadratic};

std::string classifier_column(const MethodResult& row) {
    return row.classifier ? classifier_display_name(*row.classifier) : std::string("All");
}

} // namespace

std::string MethodResult::method_name() const {
    return encoding_display_name(encoding.kind) + "-" + classifier_column(*this);
}

std::vector<int> competition_ranks(std::span<const double> means) {
    std::vector<int> ranks(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        int better = 0;
        for (std::size_t j = 0; j < means.size(); ++j) {
            if (means[j] > means[i]) {
                ++better;
            }
        }
        ranks[i] = 1 + better;
    }
    return ranks;
}

std::vector<int> rank(const ResultTable& table, Weighting weighting) {
    const std::size_t w = static_cast<std::size_t>(weighting);
    std::vector<double> ok_means;
    for (const MethodResult& row : table.rows) {
        if (!row.cells[w].failed) {
            ok_means.push_back(row.cells[w].mean);
        }
    }
    const std::vector<int> ok_ranks = competition_ranks(ok_means);
    const int last = static_cast<int>(ok_means.size()) + 1;

    std::vector<int> ranks(table.rows.size());
    std::size_t next_ok = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        ranks[i] = table.rows[i].cells[w].failed ? last : ok_ranks[next_ok++];
    }
    return ranks;
}

void apply_ranks(ResultTable& table) {
    for (Weighting weighting : kWeightings) {
        const auto ranks = rank(table, weighting);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            table.rows[i].cells[static_cast<std::size_t>(weighting)].rank = ranks[i];
        }
    }
}

std::string format_sd(double sd) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2e", sd);
    // trim the exponent padding: 1.09e-03 -> 1.09e-3
    std::string s(buf);
    const auto e = s.find('e');
    std::string exponent = s.substr(e + 2);
    while (exponent.size() > 1 && exponent.front() == '0') {
        exponent.erase(exponent.begin());
    }
    return s.substr(0, e + 2) + exponent;
}

std::string format_kappa_cell(double mean, double sd) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", mean);
    return std::string(buf) + kPlusMinus + format_sd(sd);
}

namespace {

std::string cell_text(const CellValue& cell) {
    return cell.failed ? kFailedCell : format_kappa_cell(cell.mean, cell.sd);
}

std::string rank_text(const CellValue& cell) {
    return cell.failed ? kFailedCell : std::to_string(cell.rank);
}

} // namespace

std::string render_csv(const ResultTable& table) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const MethodResult& row : table.rows) {
        out += encoding_display_name(row.encoding.kind);
        out += ',';
        out += classifier_column(row);
        for (Weighting weighting : kWeightings) {
            const CellValue& cell = row.cells[static_cast<std::size_t>(weighting)];
            out += ',';
            out += cell_text(cell);
            out += ',';
            out += rank_text(cell);
        }
        out += '\n';
    }
    return out;
}

std::string render_markdown(const ResultTable& table) {
    std::string out =
        "| Targ.-fn | Class.-fn | Unweight. κ | # | Lin. κ | # | Quad. κ | # |\n"
        "|---|---|---|---|---|---|---|---|\n";
    for (const MethodResult& row : table.rows) {
        out += "| " + encoding_display_name(row.encoding.kind) + " | " + classifier_column(row);
        for (Weighting weighting : kWeightings) {
            const CellValue& cell = row.cells[static_cast<std::size_t>(weighting)];
            std::string text = cell_text(cell);
            if (!cell.failed && cell.rank == 1) {
                text = "**" + text + "**";
            }
            out += " | " + text + " | " + rank_text(cell);
        }
        out += " |\n";
    }
    if (!table.config_hash.empty()) {
        out += "\nconfig " + table.config_hash + ", split seed " +
               std::to_string(table.split_seed) + ", run seed " +
               std::to_string(table.run_seed) + ", init seed " +
               std::to_string(table.init_seed) + "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

double parse_number(const std::string& text, std::size_t line_number) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw ParseError("bad numeric field \"" + text + "\"", line_number);
    }
    return v;
}

CellValue parse_cell(const std::string& kappa_field, const std::string& rank_field,
                     std::size_t line_number) {
    CellValue cell;
    if (kappa_field == kFailedCell) {
        cell.failed = true;
        if (rank_field != kFailedCell) {
            cell.rank = static_cast<int>(parse_number(rank_field, line_number));
        }
        return cell;
    }
    const auto sep = kappa_field.find(kPlusMinus);
    if (sep == std::string::npos) {
        throw ParseError("kappa cell \"" + kappa_field + "\" lacks a ± separator",
                         line_number);
    }
    cell.mean = parse_number(kappa_field.substr(0, sep), line_number);
    cell.sd = parse_number(kappa_field.substr(sep + std::string(kPlusMinus).size()),
                           line_number);
    cell.rank = static_cast<int>(parse_number(rank_field, line_number));
    return cell;
}

} // namespace

ResultTable parse_table_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    std::size_t line_number = 0;
    ResultTable table;
    bool saw_header = false;
    while (std::getline(stream, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        if (!saw_header) {
            if (line != kCsvHeader) {
                throw ParseError("unexpected results header", line_number);
            }
            saw_header = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 8) {
            throw ParseError("expected 8 columns, got " + std::to_string(fields.size()),
                             line_number);
        }
        MethodResult row;
        row.encoding.kind = parse_encoding_display_name(fields[0]);
        if (fields[1] == "All") {
            row.classifier = std::nullopt;
        } else {
            row.classifier = parse_classifier_display_name(fields[1]);
        }
        for (std::size_t w = 0; w < kWeightingCount; ++w) {
            row.cells[w] = parse_cell(fields[2 + 2 * w], fields[3 + 2 * w], line_number);
        }
        table.rows.push_back(std::move(row));
    }
    if (!saw_header) {
        throw ParseError("empty results document", 0);
    }
    return table;
}

namespace {

// Row indices ordered by (rank, table position) for one weighting.
std::vector<std::size_t> rank_order(const ResultTable& table, Weighting weighting) {
    std::vector<std::size_t> order(table.rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t w = static_cast<std::size_t>(weighting);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return table.rows[a].cells[w].rank < table.rows[b].cells[w].rank;
    });
    return order;
}

std::string signed_delta(int delta) {
    if (delta > 0) {
        return "+" + std::to_string(delta);
    }
    return std::to_string(delta);
}

std::string pad(std::string s, std::size_t width) {
    // column widths count display characters, not bytes
    std::size_t glyphs = 0;
    for (char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++glyphs;
        }
    }
    while (glyphs < width) {
        s += ' ';
        ++glyphs;
    }
    return s;
}

} // namespace

std::string rank_change_text(const ResultTable& table) {
    const auto unweighted = rank_order(table, Weighting::Unweighted);
    const auto linear = rank_order(table, Weighting::Linear);
    const auto quadratic = rank_order(table, Weighting::Quadratic);

    auto entry = [&](std::size_t row_index, Weighting weighting, bool with_delta) {
        const MethodResult& row = table.rows[row_index];
        const std::size_t w = static_cast<std::size_t>(weighting);
        std::string text =
            pad(std::to_string(row.cells[w].rank), 2) + " " + row.method_name();
        if (with_delta) {
            const int previous = row.cells[w - 1].rank;
            text += " (" + signed_delta(previous - row.cells[w].rank) + ")";
        }
        return text;
    };

    std::size_t width = 0;
    std::vector<std::array<std::string, 3>> lines(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        lines[i] = {entry(unweighted[i], Weighting::Unweighted, false),
                    entry(linear[i], Weighting::Linear, true),
                    entry(quadratic[i], Weighting::Quadratic, true)};
        for (const std::string& cell : lines[i]) {
            width = std::max(width, cell.size());
        }
    }

    std::string out = pad("Unweighted", width) + "  " + pad("Linear", width) + "  Quadratic\n";
    for (const auto& line : lines) {
        out += pad(line[0], width) + "  " + pad(line[1], width) + "  " + line[2] + "\n";
    }
    return out;
}

std::string rank_change_csv(const ResultTable& table) {
    std::string out =
        "method,unweighted_rank,linear_rank,quadratic_rank,"
        "unweighted_to_linear,linear_to_quadratic\n";
    for (const MethodResult& row : table.rows) {
        const int r0 = row.cells[0].rank;
        const int r1 = row.cells[1].rank;
        const int r2 = row.cells[2].rank;
        out += row.method_name() + "," + std::to_string(r0) + "," + std::to_string(r1) + "," +
               std::to_string(r2) + "," + signed_delta(r0 - r1) + "," + signed_delta(r1 - r2) +
               "\n";
    }
    return out;
}

} // namespace ordreg
