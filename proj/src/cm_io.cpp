#include "fermiwork/cm_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "fermiwork/errors.hpp"

namespace fermiwork {

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::vector<double> parse_reals(const std::string& line, int line_no) {
  std::istringstream in(line);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof()) {
    std::string rest;
    in.clear();
    in >> rest;
    throw ParseError("expected a number, got '" + rest + "'", line_no);
  }
  return out;
}

std::string full_precision(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RawCmFile parse_cm_text_raw(std::istream& in) {
  int line_no = 0;
  int n = 0;
  std::vector<double> omegas;
  Eigen::MatrixXd gamma;
  int rows_read = 0;
  enum class Stage { modes, omega, matrix, done } stage = Stage::modes;

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (blank(line)) continue;
    switch (stage) {
      case Stage::modes: {
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw != "modes") throw ParseError("expected 'modes n', got '" + kw + "'", line_no);
        if (!(ls >> n) || n < 1) throw ParseError("mode count must be a positive integer", line_no);
        std::string rest;
        if (ls >> rest) throw ParseError("unexpected token '" + rest + "' after mode count", line_no);
        stage = Stage::omega;
        break;
      }
      case Stage::omega: {
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw != "omega") throw ParseError("expected 'omega w_1 ... w_n', got '" + kw + "'", line_no);
        std::string tail;
        std::getline(ls, tail);
        omegas = parse_reals(tail, line_no);
        if (static_cast<int>(omegas.size()) != n)
          throw ParseError("expected " + std::to_string(n) + " frequencies, got " +
                               std::to_string(omegas.size()),
                           line_no);
        gamma.setZero(2 * n, 2 * n);
        stage = Stage::matrix;
        break;
      }
      case Stage::matrix: {
        const std::vector<double> row = parse_reals(line, line_no);
        if (static_cast<int>(row.size()) != 2 * n)
          throw ParseError("matrix row " + std::to_string(rows_read + 1) + " has " +
                               std::to_string(row.size()) + " entries, expected " +
                               std::to_string(2 * n),
                           line_no);
        for (int c = 0; c < 2 * n; ++c) gamma(rows_read, c) = row[c];
        if (++rows_read == 2 * n) stage = Stage::done;
        break;
      }
      case Stage::done:
        throw ParseError("unexpected content after the matrix", line_no);
    }
  }
  if (stage != Stage::done) {
    switch (stage) {
      case Stage::modes: throw ParseError("missing 'modes n' header", line_no);
      case Stage::omega: throw ParseError("missing 'omega' line", line_no);
      default:
        throw ParseError("matrix ended after " + std::to_string(rows_read) + " of " +
                             std::to_string(2 * n) + " rows",
                         line_no);
    }
  }
  return RawCmFile{ModeSystem(std::move(omegas)), std::move(gamma)};
}

CmFile parse_cm_text(std::istream& in) {
  RawCmFile raw = parse_cm_text_raw(in);
  return CmFile{std::move(raw.modes), CovarianceMatrix(std::move(raw.gamma))};
}

CmFile read_cm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_cm_text(in);
}

std::string format_cm_text(const ModeSystem& modes, const CovarianceMatrix& cm) {
  if (modes.n_modes() != cm.n_modes())
    throw ArgumentError("format_cm_text: mode count mismatch");
  std::ostringstream out;
  out << "modes " << modes.n_modes() << "\n";
  out << "omega";
  for (double w : modes.omegas()) out << ' ' << full_precision(w);
  out << "\n";
  const int dim = 2 * modes.n_modes();
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) out << (c ? " " : "") << full_precision(cm.matrix()(r, c));
    out << "\n";
  }
  return out.str();
}

void write_cm_file(const std::string& path, const ModeSystem& modes, const CovarianceMatrix& cm) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << format_cm_text(modes, cm);
  if (!out) throw ParseError("write to '" + path + "' failed");
}

}  // namespace fermiwork
