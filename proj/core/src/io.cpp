#include "nsdde/io.hpp"

#include <charconv>
#include <ostream>

namespace nsdde {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value,
                                      std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

void write_path_csv(std::ostream& out, const PathGrid& path) {
    out << 't';
    for (int i = 1; i <= path.state_dim(); ++i) out << ",x_" << i;
    out << '\n';
    for (std::int64_t l = -path.grid().steps_per_delay(); l <= path.grid().total_steps(); ++l) {
        out << format_double(path.time(l));
        const auto x = path.at(l);
        for (int i = 0; i < path.state_dim(); ++i) out << ',' << format_double(x[i]);
        out << '\n';
    }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
    out << "level_pair,delta_coarse,delta_fine,epsilon,n_paths,exceed_count,p_hat,"
           "mean_sup_diff,max_sup_diff,diverged_count\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const LevelPairRow& row = table.rows[i];
        out << i << '-' << i + 1 << ',' << format_double(row.delta_coarse) << ','
            << format_double(row.delta_fine) << ',' << format_double(table.epsilon) << ','
            << table.n_paths << ',' << row.exceed_count << ',' << format_double(row.p_hat) << ','
            << format_double(row.mean_sup_diff) << ',' << format_double(row.max_sup_diff) << ','
            << row.diverged_count << '\n';
    }
}

void write_moments_csv(std::ostream& out, const std::vector<MomentReport>& reports) {
    out << "delta,n_paths,diverged_count,sup_mean_square,argmax_time,std_error,"
           "mean_sup_square,mean_sup_std_error\n";
    for (const MomentReport& r : reports) {
        out << format_double(r.delta) << ',' << r.n_paths << ',' << r.diverged_count << ','
            << format_double(r.sup_mean_square) << ',' << format_double(r.argmax_time) << ','
            << format_double(r.std_error) << ',' << format_double(r.mean_sup_square) << ','
            << format_double(r.mean_sup_std_error) << '\n';
    }
}

void write_perturbation_csv(std::ostream& out, const PerturbationTable& table) {
    out << "delta,radius,n_paths,diverged_count,truncated_count,mean_abs_integral,"
           "se_abs_integral,mean_lambda,se_lambda\n";
    for (const PerturbationRow& r : table.rows) {
        out << format_double(r.delta) << ',' << format_double(table.radius) << ',' << r.n_paths
            << ',' << r.diverged_count << ',' << r.truncated_count << ','
            << format_double(r.mean_abs_integral) << ',' << format_double(r.se_abs_integral)
            << ',' << format_double(r.mean_lambda) << ',' << format_double(r.se_lambda) << '\n';
    }
}

}  // namespace nsdde
