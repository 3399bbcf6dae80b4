#include "core/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace rpt {
namespace io {

namespace {

struct Header {
    long dim = 0;
    int qubits = -1;  // -1 = absent
    int count = 1;
    ChoiConvention convention = ChoiConvention::raw;
    bool has_count = false;
};

struct Parsed {
    Header header;
    std::vector<cplx> entries;
};

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
    throw parse_error(path + ":" + std::to_string(line) + ": " + what);
}

bool parse_long(const std::string& tok, long& out) {
    try {
        size_t used = 0;
        out = std::stol(tok, &used);
        return used == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_real(const std::string& tok, double& out) {
    try {
        size_t used = 0;
        out = std::stod(tok, &used);
        return used == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

// One entry: "re,im" or a bare real.
bool parse_entry(const std::string& tok, cplx& out) {
    const size_t comma = tok.find(',');
    double re = 0.0, im = 0.0;
    if (comma == std::string::npos) {
        if (!parse_real(tok, re)) return false;
    } else {
        if (!parse_real(tok.substr(0, comma), re)) return false;
        if (!parse_real(tok.substr(comma + 1), im)) return false;
    }
    out = cplx(re, im);
    return true;
}

// matrix=false reads count * dim entries (state vectors), matrix=true reads
// count * dim * dim.
Parsed parse_file(const std::string& path, bool matrix) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");

    Parsed p;
    bool have_dim = false;
    bool in_entries = false;
    long expected = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;   // blank
        if (tok[0] == '#') continue;  // comment
        if (!have_dim) {
            if (tok != "dim") fail(path, lineno, "expected 'dim <d>' header");
            std::string val;
            if (!(ls >> val) || !parse_long(val, p.header.dim) || p.header.dim < 1)
                fail(path, lineno, "bad dimension value");
            if (p.header.dim > kMaxDim) fail(path, lineno, "dimension exceeds the dense cap");
            std::string extra;
            if (ls >> extra) fail(path, lineno, "trailing text after header");
            have_dim = true;
            continue;
        }
        if (!in_entries && (tok == "qubits" || tok == "convention" || tok == "count")) {
            std::string val;
            if (!(ls >> val)) fail(path, lineno, "missing value for '" + tok + "'");
            if (tok == "qubits") {
                long q = 0;
                if (!parse_long(val, q) || q < 1 || q > 30) fail(path, lineno, "bad qubit count");
                p.header.qubits = static_cast<int>(q);
            } else if (tok == "count") {
                long c = 0;
                if (!parse_long(val, c) || c < 1 || c > 4096)
                    fail(path, lineno, "bad operator count");
                p.header.count = static_cast<int>(c);
                p.header.has_count = true;
            } else {
                if (val == "raw")
                    p.header.convention = ChoiConvention::raw;
                else if (val == "measurement")
                    p.header.convention = ChoiConvention::measurement;
                else
                    fail(path, lineno, "convention must be 'raw' or 'measurement'");
            }
            std::string extra;
            if (ls >> extra) fail(path, lineno, "trailing text after header");
            continue;
        }
        if (!in_entries) {
            in_entries = true;
            expected = p.header.count * p.header.dim * (matrix ? p.header.dim : 1);
            p.entries.reserve(static_cast<size_t>(expected));
        }
        do {
            cplx v;
            if (!parse_entry(tok, v)) fail(path, lineno, "bad entry '" + tok + "'");
            if (static_cast<long>(p.entries.size()) == expected)
                fail(path, lineno, "more entries than the header promises");
            p.entries.push_back(v);
        } while (ls >> tok);
    }
    if (!have_dim) throw parse_error(path + ": missing 'dim' header");
    if (!in_entries) expected = p.header.count * p.header.dim * (matrix ? p.header.dim : 1);
    if (static_cast<long>(p.entries.size()) != expected)
        throw parse_error(path + ": expected " + std::to_string(expected) + " entries, found " +
                          std::to_string(p.entries.size()));
    return p;
}

std::vector<int> factor_dims_for(const Header& h, const std::string& path) {
    if (h.qubits < 0) return {static_cast<int>(h.dim)};
    if ((1L << h.qubits) != h.dim) throw parse_error(path + ": dimension is not 2^qubits");
    return std::vector<int>(static_cast<size_t>(h.qubits), 2);
}

Mat matrix_from(const std::vector<cplx>& entries, long offset, long d) {
    Mat m(d, d);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) m(r, c) = entries[static_cast<size_t>(offset + r * d + c)];
    return m;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path + ": cannot open file for writing");
    return out;
}

void write_matrix(std::ostream& out, const Mat& m) {
    for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
        }
        out << '\n';
    }
}

}  // namespace

StateVector load_state(const std::string& path) {
    const Parsed p = parse_file(path, false);
    if (p.header.has_count) throw parse_error(path + ": 'count' is not valid in a state file");
    Vec amp(p.header.dim);
    for (long i = 0; i < p.header.dim; ++i) amp(i) = p.entries[static_cast<size_t>(i)];
    try {
        return StateVector(amp, factor_dims_for(p.header, path), true);
    } catch (const std::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
}

DenseOperator load_operator(const std::string& path) {
    const Parsed p = parse_file(path, true);
    if (p.header.has_count)
        throw parse_error(path + ": 'count' is not valid in an operator file");
    try {
        return DenseOperator(matrix_from(p.entries, 0, p.header.dim),
                             factor_dims_for(p.header, path));
    } catch (const std::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
}

std::vector<Mat> load_kraus(const std::string& path) {
    const Parsed p = parse_file(path, true);
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(p.header.count));
    const long d = p.header.dim;
    for (int k = 0; k < p.header.count; ++k) out.push_back(matrix_from(p.entries, k * d * d, d));
    return out;
}

ChoiMatrix load_choi(const std::string& path) {
    const Parsed p = parse_file(path, true);
    if (p.header.has_count) throw parse_error(path + ": 'count' is not valid in a Choi file");
    int n = p.header.qubits;
    if (n < 0) {
        long side = p.header.dim;
        n = 0;
        while (side > 1 && side % 4 == 0) {
            side /= 4;
            ++n;
        }
        if (side != 1) throw parse_error(path + ": dimension is not 4^n");
    } else if ((1L << (2 * n)) != p.header.dim) {
        throw parse_error(path + ": dimension is not 4^qubits");
    }
    try {
        return ChoiMatrix(n, matrix_from(p.entries, 0, p.header.dim), p.header.convention);
    } catch (const std::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
}

void save_state(const std::string& path, const StateVector& s) {
    std::ofstream out = open_out(path);
    out << "dim " << s.dim() << '\n';
    bool all_qubits = true;
    for (int f : s.factor_dims()) all_qubits = all_qubits && f == 2;
    if (all_qubits && s.dim() > 1) out << "qubits " << s.factor_dims().size() << '\n';
    for (long i = 0; i < s.dim(); ++i)
        out << format_double(s.amp()(i).real()) << ',' << format_double(s.amp()(i).imag())
            << '\n';
}

void save_operator(const std::string& path, const DenseOperator& a) {
    std::ofstream out = open_out(path);
    out << "dim " << a.dim() << '\n';
    bool all_qubits = true;
    for (int f : a.factor_dims()) all_qubits = all_qubits && f == 2;
    if (all_qubits && a.dim() > 1) out << "qubits " << a.factor_dims().size() << '\n';
    write_matrix(out, a.mat());
}

void save_kraus(const std::string& path, const std::vector<Mat>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("empty Kraus set");
    const long d = kraus.front().rows();
    for (const Mat& k : kraus)
        if (k.rows() != d || k.cols() != d)
            throw std::invalid_argument("Kraus operators must share one square dimension");
    std::ofstream out = open_out(path);
    out << "dim " << d << '\n';
    out << "count " << kraus.size() << '\n';
    for (const Mat& k : kraus) write_matrix(out, k);
}

void save_choi(const std::string& path, const ChoiMatrix& c) {
    std::ofstream out = open_out(path);
    out << "dim " << c.mat().rows() << '\n';
    out << "qubits " << c.n() << '\n';
    out << "convention "
        << (c.convention() == ChoiConvention::raw ? "raw" : "measurement") << '\n';
    write_matrix(out, c.mat());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

CsvWriter::CsvWriter(std::ostream& out, std::uint64_t config_hash, std::uint64_t seed,
                     const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
    char head[64];
    std::snprintf(head, sizeof(head), "# config_hash=0x%016llx seed=%llu",
                  static_cast<unsigned long long>(config_hash),
                  static_cast<unsigned long long>(seed));
    out_ << head << '\n';
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw std::invalid_argument("CSV row width mismatch");
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") == std::string::npos) {
            out_ << f;
            continue;
        }
        out_ << '"';
        for (char c : f) {
            if (c == '"') out_ << '"';
            out_ << c;
        }
        out_ << '"';
    }
    out_ << '\n';
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

}  // namespace io
}  // namespace rpt
