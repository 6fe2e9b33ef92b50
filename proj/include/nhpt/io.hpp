// io.hpp — CSV artifact writers, operator file format, flat key=value config.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhpt/dynamics.hpp"
#include "nhpt/operators.hpp"
#include "nhpt/scenarios.hpp"
#include "nhpt/spectrum.hpp"
#include "nhpt/transition_matrix.hpp"

namespace nhpt::io {

// 12 significant digits everywhere so identical runs produce identical bytes
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void ensure_parent_dir(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(open(path)) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_) throw std::invalid_argument("CsvWriter: column mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(values[i]);
        }
        out_ << '\n';
    }

private:
    static std::ofstream open(const std::filesystem::path& path) {
        ensure_parent_dir(path);
        std::ofstream f(path, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
        return f;
    }
    std::ofstream out_;
    std::size_t columns_;
};

inline void write_populations_csv(const AmplitudeTrajectory& traj,
                                  const std::filesystem::path& path) {
    const auto n = traj.final.size();
    std::vector<std::string> header{"t"};
    for (Eigen::Index l = 0; l < n; ++l) header.push_back("pop_" + std::to_string(l + 1));
    CsvWriter csv(path, header);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<double> row{traj.times[k]};
        for (Eigen::Index l = 0; l < n; ++l) row.push_back(traj.populations[k](l));
        csv.row(row);
    }
}

inline void write_trajectory_csv(const AmplitudeTrajectory& traj,
                                 const std::filesystem::path& path) {
    const auto n = traj.final.size();
    std::vector<std::string> header{"t"};
    for (Eigen::Index l = 0; l < n; ++l) {
        const std::string i = std::to_string(l + 1);
        header.push_back("re_c_" + i);
        header.push_back("im_c_" + i);
        header.push_back("pop_" + i);
    }
    CsvWriter csv(path, header);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<double> row{traj.times[k]};
        for (Eigen::Index l = 0; l < n; ++l) {
            row.push_back(traj.c[k](l).real());
            row.push_back(traj.c[k](l).imag());
            row.push_back(traj.populations[k](l));
        }
        csv.row(row);
    }
}

inline void write_final_amplitudes_csv(const AmplitudeTrajectory& traj,
                                       const std::filesystem::path& path) {
    CsvWriter csv(path, {"state", "re_c", "im_c", "population"});
    for (Eigen::Index l = 0; l < traj.final.size(); ++l) {
        csv.row({static_cast<double>(l + 1), traj.final(l).real(), traj.final(l).imag(),
                 std::norm(traj.final(l))});
    }
}

inline void write_loop_csv(const Loop& loop, const std::filesystem::path& path) {
    CsvWriter csv(path, {"re_z", "im_z"});
    for (const auto& z : loop.samples) csv.row({z.real(), z.imag()});
}

inline void write_spectrum_csv(const SpectrumGrid& g, const std::filesystem::path& path) {
    CsvWriter csv(path, {"omega", "re_F", "im_F", "abs_F"});
    for (std::size_t k = 0; k < g.omegas.size(); ++k) {
        csv.row({g.omegas[k], g.values[k].real(), g.values[k].imag(), std::abs(g.values[k])});
    }
}

inline void write_transition_csv(const TransitionMatrix& tm,
                                 const std::filesystem::path& path) {
    ensure_parent_dir(path);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << "from,to,W,source\n";
    for (Eigen::Index n = 0; n < tm.dim(); ++n) {
        for (Eigen::Index m = 0; m < tm.dim(); ++m) {
            f << (n + 1) << ',' << (m + 1) << ',' << format_double(tm.W(n, m)) << ','
              << to_string(tm.source) << '\n';
        }
    }
}

// Operator file: first line N, then N lines of N whitespace-separated "re,im".
inline Matrix read_operator_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open operator file: " + path.string());
    int n = 0;
    if (!(f >> n) || n < 2) {
        throw std::runtime_error("operator file: first token must be the dimension N >= 2");
    }
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::string tok;
            if (!(f >> tok)) {
                throw std::runtime_error("operator file: expected " + std::to_string(n * n) +
                                         " entries");
            }
            const auto comma = tok.find(',');
            if (comma == std::string::npos) {
                throw std::runtime_error("operator file: entry '" + tok + "' is not re,im");
            }
            try {
                m(i, j) = Complex(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
            } catch (const std::exception&) {
                throw std::runtime_error("operator file: cannot parse entry '" + tok + "'");
            }
        }
    }
    return m;
}

inline void write_operator_file(const Matrix& m, const std::filesystem::path& path) {
    ensure_parent_dir(path);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << m.rows() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) f << ' ';
            f << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
        }
        f << '\n';
    }
}

// Flat key = value file; '#' starts a comment, blank lines ignored.
inline std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

} // namespace nhpt::io
