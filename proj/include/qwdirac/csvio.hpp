#ifndef QWDIRAC_CSVIO_HPP
#define QWDIRAC_CSVIO_HPP

#include <string>
#include <vector>

namespace qwd {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Writes text to path atomically: a sibling temp file is written and then
// renamed over the target, so readers never observe a partial file. Parent
// directories are created as needed. Throws std::runtime_error on IO errors.
void write_text_atomic(const std::string& path, const std::string& text);

// CSV contract: comma separator, '.' decimal point, UTF-8, LF line endings,
// mandatory header row. Numeric cells are formatted with format_double and
// must be finite; the string-cell variant additionally allows empty cells
// (read back as NaN) for columns that end early, like geodesic overlays.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_csv_cells(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& cells);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

} // namespace qwd

#endif
