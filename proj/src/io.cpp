#include "sfem/io.hpp"

#include "sfem/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace sfem {

std::string format_real(double value)
{
    return fmt::format("{:.17g}", value);
}

std::string surface_spec(const Surface& surface)
{
    std::string line(surface.name());
    for (double p : surface.params()) {
        line += ' ';
        line += format_real(p);
    }
    return line;
}

Surface parse_surface_spec(const std::string& line)
{
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    std::vector<double> params;
    double v = 0.0;
    while (ss >> v) {
        params.push_back(v);
    }
    if (!ss.eof()) {
        throw FormatError(fmt::format("bad surface parameters in '{}'", line));
    }
    if (kind == "sphere" && params.empty()) {
        return Surface::unit_sphere();
    }
    if (kind == "torus" && params.size() == 2) {
        return Surface::torus(params[0], params[1]);
    }
    if (kind == "ellipsoid" && params.size() == 3) {
        return Surface::ellipsoid(params[0], params[1], params[2]);
    }
    throw FormatError(fmt::format("unknown surface '{}'", line));
}

void write_mesh(std::ostream& out, const TriMesh& mesh)
{
    out << "SFEM-MESH 1\n";
    out << surface_spec(mesh.surface()) << '\n';
    fmt::print(out, "{} {}\n", mesh.n_vertices(), mesh.n_faces());
    for (const Vec3& v : mesh.vertices()) {
        fmt::print(out, "{:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
    }
    for (const Face& f : mesh.faces()) {
        fmt::print(out, "{} {} {}\n", f[0], f[1], f[2]);
    }
}

TriMesh read_mesh(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "SFEM-MESH 1") {
        throw FormatError("missing 'SFEM-MESH 1' header");
    }
    if (!std::getline(in, line)) {
        throw FormatError("missing surface line");
    }
    Surface surface = [&] {
        try {
            return parse_surface_spec(line);
        } catch (const DomainError& e) {
            throw FormatError(e.what());
        }
    }();

    long long nv = -1;
    long long nf = -1;
    if (!std::getline(in, line) || !(std::istringstream(line) >> nv >> nf) || nv < 0 || nf < 0) {
        throw FormatError("bad counts line");
    }
    std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
    for (auto& v : vertices) {
        if (!(in >> v.x() >> v.y() >> v.z())) {
            throw FormatError("truncated vertex block");
        }
    }
    std::vector<Face> faces(static_cast<std::size_t>(nf));
    for (auto& f : faces) {
        long long i = 0;
        long long j = 0;
        long long k = 0;
        if (!(in >> i >> j >> k)) {
            throw FormatError("truncated face block");
        }
        for (long long idx : {i, j, k}) {
            if (idx < 0 || idx >= nv) {
                throw FormatError(fmt::format("face index {} out of range", idx));
            }
        }
        f = {static_cast<Index>(i), static_cast<Index>(j), static_cast<Index>(k)};
    }
    std::string trailing;
    if (in >> trailing) {
        throw FormatError("unexpected data after the face block");
    }
    return TriMesh(std::move(surface), std::move(vertices), std::move(faces), 0);
}

namespace {

std::string cell(const std::optional<double>& v)
{
    return v ? format_real(*v) : std::string();
}

} // namespace

TextTable to_text_table(const ConvergenceTable& table)
{
    TextTable t;
    t.header = {"level", "h", "n_dofs", "err_L2", "err_H1", "err_Linf", "eoc_L2", "eoc_H1", "eoc_Linf"};
    for (std::size_t k = 0; k < table.records.size(); ++k) {
        const ErrorRecord& r = table.records[k];
        std::vector<std::string> row{std::to_string(r.level), format_real(r.h),        std::to_string(r.n_dofs),
                                     format_real(r.err_L2),   format_real(r.err_H1),   format_real(r.err_Linf)};
        if (k == 0) {
            row.insert(row.end(), 3, std::string());
        } else {
            row.push_back(format_real(table.eoc_L2[k - 1]));
            row.push_back(format_real(table.eoc_H1[k - 1]));
            row.push_back(format_real(table.eoc_Linf[k - 1]));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

TextTable to_text_table(const GreenStudy& study)
{
    TextTable t;
    t.header = {"level", "h", "w11_diff", "eoc_w11", "peak", "total_mass"};
    for (const auto& r : study.rows) {
        t.rows.push_back({std::to_string(r.level), format_real(r.h), cell(r.w11_diff), cell(r.eoc_w11),
                          format_real(r.peak), format_real(r.total_mass)});
    }
    return t;
}

void write_table(std::ostream& out, const TextTable& table, TableFormat format)
{
    if (format == TableFormat::Csv) {
        const auto line = [&out](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                out << (i ? "," : "") << cells[i];
            }
            out << '\n';
        };
        line(table.header);
        for (const auto& row : table.rows) {
            line(row);
        }
        return;
    }

    std::vector<std::size_t> width(table.header.size(), 3);
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        width[i] = std::max(width[i], table.header[i].size());
        for (const auto& row : table.rows) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    const auto line = [&](const std::vector<std::string>& cells) {
        out << '|';
        for (std::size_t i = 0; i < cells.size(); ++i) {
            fmt::print(out, " {:<{}} |", cells[i], width[i]);
        }
        out << '\n';
    };
    line(table.header);
    out << '|';
    for (std::size_t w : width) {
        out << ' ' << std::string(w, '-') << " |";
    }
    out << '\n';
    for (const auto& row : table.rows) {
        line(row);
    }
}

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(' ');
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(' ') - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string current;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    parts.push_back(current);
    return parts;
}

} // namespace

TextTable parse_table(std::istream& in, TableFormat format)
{
    TextTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        if (format == TableFormat::Csv) {
            cells = split(line, ',');
        } else {
            if (line.front() != '|' || line.back() != '|') {
                throw FormatError(fmt::format("not a Markdown table row: '{}'", line));
            }
            for (const auto& c : split(line.substr(1, line.size() - 2), '|')) {
                cells.push_back(trim(c));
            }
            if (!first && std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
                    return !c.empty() && c.find_first_not_of('-') == std::string::npos;
                })) {
                continue;
            }
        }
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size()) {
                throw FormatError("row width does not match the header");
            }
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

} // namespace sfem
