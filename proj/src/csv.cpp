#include "twoway/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace twoway {

std::string format_real(double x, Precision precision) {
    char buf[64];
    std::to_chars_result r =
        precision == Precision::Full
            ? std::to_chars(buf, buf + sizeof(buf), x)
            : std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 6);
    return std::string(buf, r.ptr);
}

void emit_grid_csv(std::span<const GridCellSummary> summaries, std::ostream& out,
                   Precision precision) {
    if (summaries.empty())
        throw std::invalid_argument("emit_grid_csv: no summaries");
    out << "delta,j,phi,coverage_cgm,coverage_m,ci_len_cgm,ci_len_m,neg_var_rate,ks,"
           "replications,coverage_mc_se\n";
    for (const auto& s : summaries) {
        out << format_real(s.delta, precision) << ',' << s.j << ','
            << format_real(s.phi, precision) << ',' << format_real(s.coverage_cgm, precision)
            << ',' << format_real(s.coverage_m, precision) << ','
            << format_real(s.mean_ci_length_cgm, precision) << ','
            << format_real(s.mean_ci_length_m, precision) << ','
            << format_real(s.negative_variance_rate, precision) << ','
            << format_real(s.ks_distance, precision) << ',' << s.replications << ','
            << format_real(s.coverage_mc_se, precision) << '\n';
    }
}

void emit_qq_csv(const NormalityStats& stats, std::ostream& out, Precision precision) {
    if (stats.qq_points.empty())
        throw std::invalid_argument("emit_qq_csv: no qq points");
    out << "p,theoretical,sample\n";
    const double n = static_cast<double>(stats.qq_points.size());
    for (std::size_t k = 0; k < stats.qq_points.size(); ++k) {
        const double p = (static_cast<double>(k) + 1.0) / (n + 1.0);
        out << format_real(p, precision) << ','
            << format_real(stats.qq_points[k].first, precision) << ','
            << format_real(stats.qq_points[k].second, precision) << '\n';
    }
    out << "# ks=" << format_real(stats.ks_distance, precision) << '\n';
}

void write_panel_csv(const Panel& panel, std::ostream& out) {
    if (panel.data.empty())
        throw std::invalid_argument("write_panel_csv: empty panel");
    for (std::size_t i = 0; i < panel.n_rows; ++i) {
        for (std::size_t t = 0; t < panel.n_cols; ++t) {
            if (t)
                out << ',';
            out << format_real(panel.at(i, t), Precision::Full);
        }
        out << '\n';
    }
}

Panel read_panel_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            std::string cell = comma == std::string::npos ? line.substr(pos)
                                                          : line.substr(pos, comma - pos);
            // Tolerate surrounding spaces, nothing else.
            std::size_t b = cell.find_first_not_of(" \t");
            std::size_t e = cell.find_last_not_of(" \t");
            if (b == std::string::npos)
                throw std::runtime_error("panel csv line " + std::to_string(line_no) +
                                         ": empty cell");
            cell = cell.substr(b, e - b + 1);
            double v = 0.0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v))
                throw std::runtime_error("panel csv line " + std::to_string(line_no) +
                                         ": bad number \"" + cell + "\"");
            row.push_back(v);
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("panel csv line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(rows.front().size()) +
                                     " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::runtime_error("panel csv: no data");
    Panel panel(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < panel.n_rows; ++i)
        for (std::size_t t = 0; t < panel.n_cols; ++t)
            panel.at(i, t) = rows[i][t];
    return panel;
}

}  // namespace twoway
