#pragma once

#include "sfem/green.hpp"
#include "sfem/mesh.hpp"
#include "sfem/norms.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sfem {

/// Shortest decimal text with 17 significant digits, the format used by every writer.
std::string format_real(double value);

// Mesh files:
//
//   SFEM-MESH 1
//   <surface-kind> <params...>
//   <V> <F>
//   x y z            (V lines)
//   i j k            (F lines, 0-based)
void write_mesh(std::ostream& out, const TriMesh& mesh);
/// Throws FormatError on malformed text and InvalidMesh when the mesh breaks an invariant.
TriMesh read_mesh(std::istream& in);

/// Surface line of the mesh format, e.g. "torus 2 0.5".
std::string surface_spec(const Surface& surface);
Surface parse_surface_spec(const std::string& line);

enum class TableFormat { Csv, Markdown };

/// Header row plus string cells; the two writers render the same cells.
struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

TextTable to_text_table(const ConvergenceTable& table);
TextTable to_text_table(const GreenStudy& study);

void write_table(std::ostream& out, const TextTable& table, TableFormat format);

/// Parses CSV or aligned Markdown written by write_table.
TextTable parse_table(std::istream& in, TableFormat format);

} // namespace sfem
