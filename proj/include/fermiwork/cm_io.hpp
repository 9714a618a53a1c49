#pragma once

#include <iosfwd>
#include <string>

#include "fermiwork/covariance.hpp"
#include "fermiwork/modes.hpp"

namespace fermiwork {

/// Covariance matrix text format (UTF-8, '#' starts a comment):
///   modes n
///   omega w_1 ... w_n
///   <2n rows of 2n space-separated reals, row-major, interleaved ordering>
struct CmFile {
  ModeSystem modes;
  CovarianceMatrix cm;
};

/// Parse without the physicality check: the raw matrix can then be fed to
/// diagnose_cm for a report instead of an exception.
struct RawCmFile {
  ModeSystem modes;
  Eigen::MatrixXd gamma;
};

/// Throws ParseError (with line number) on malformed text.
RawCmFile parse_cm_text_raw(std::istream& in);

/// Throws ParseError (with line number) on malformed text; the matrix is
/// validated on construction and may throw ValidationError.
CmFile parse_cm_text(std::istream& in);

/// Reads and parses a covariance file; throws ParseError if unreadable.
CmFile read_cm_file(const std::string& path);

std::string format_cm_text(const ModeSystem& modes, const CovarianceMatrix& cm);

void write_cm_file(const std::string& path, const ModeSystem& modes, const CovarianceMatrix& cm);

}  // namespace fermiwork
