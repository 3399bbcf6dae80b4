#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "core/choi.hpp"
#include "core/dense.hpp"

namespace rpt {
namespace io {

// Text format shared by state, operator, Kraus-set, and Choi files:
//   # comment lines and blank lines are ignored
//   dim <d>                 required first header
//   qubits <n>              optional; for a Choi file n counts channel qubits
//   convention raw|measurement   optional, Choi files only (default raw)
//   count <k>               optional, Kraus files only (default 1)
// followed by the entries, whitespace separated, one matrix row per line
// (states: one amplitude per line), each entry "re,im" or a bare real.
// Parse failures carry "<path>:<line>:" diagnostics.

StateVector load_state(const std::string& path);
DenseOperator load_operator(const std::string& path);
std::vector<Mat> load_kraus(const std::string& path);
ChoiMatrix load_choi(const std::string& path);

void save_state(const std::string& path, const StateVector& s);
void save_operator(const std::string& path, const DenseOperator& a);
void save_kraus(const std::string& path, const std::vector<Mat>& kraus);
void save_choi(const std::string& path, const ChoiMatrix& c);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// CSV emitter: one comment line recording the config hash and seed, then a
// header row, then data rows.  LF line endings; fields containing a comma,
// quote, or newline are quoted with doubled inner quotes.
class CsvWriter {
  public:
    CsvWriter(std::ostream& out, std::uint64_t config_hash, std::uint64_t seed,
              const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& fields);
    void comment(const std::string& text);

  private:
    std::ostream& out_;
    size_t width_;
};

}  // namespace io
}  // namespace rpt
