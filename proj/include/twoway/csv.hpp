// Deterministic CSV output for grid summaries, quantile-quantile data, and
// panels, plus a strict panel reader. Reals print with 6 significant
// digits by default or exact round-trip shortest form on request; panels
// always round-trip.
#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "twoway/diagnostics.hpp"
#include "twoway/experiments.hpp"

namespace twoway {

enum class Precision { SixDigits, Full };

// Shortest exact form for Full; 6 significant digits otherwise.
std::string format_real(double x, Precision precision);

// Header: delta,j,phi,coverage_cgm,coverage_m,ci_len_cgm,ci_len_m,
// neg_var_rate,ks,replications,coverage_mc_se. One row per cell, given
// order preserved (run_grid already produces ascending lexicographic
// order). coverage_mc_se is evaluated at coverage_cgm.
void emit_grid_csv(std::span<const GridCellSummary> summaries, std::ostream& out,
                   Precision precision = Precision::SixDigits);

// Header p,theoretical,sample; one row per qq point; trailing comment line
// "# ks=<value>".
void emit_qq_csv(const NormalityStats& stats, std::ostream& out,
                 Precision precision = Precision::SixDigits);

// Plain numeric matrix, comma-separated, no header, shortest round-trip
// reals.
void write_panel_csv(const Panel& panel, std::ostream& out);

// Strict inverse of write_panel_csv: rectangular, finite entries, at least
// one cell. Throws std::runtime_error with the line number on bad input.
Panel read_panel_csv(std::istream& in);

}  // namespace twoway
