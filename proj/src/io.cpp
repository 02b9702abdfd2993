#include "rlra/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rlra {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Matrix load_dense_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows[0].size())
            throw std::runtime_error(path + ": ragged CSV rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty matrix file");
    Matrix A(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            A(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return A;
}

void save_dense_csv(const Matrix& A, const std::string& path, bool write_meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            if (j) out << ',';
            out << format_real(A(i, j));
        }
        out << '\n';
    }
    if (write_meta) {
        nlohmann::json meta{{"rows", A.rows()}, {"cols", A.cols()}};
        std::ofstream m(path + ".meta");
        m << meta.dump() << '\n';
    }
}

SparseMatrix load_coordinate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    SparseMatrix S;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        long long i, j;
        double v;
        if (!(ss >> i >> j >> v)) throw std::runtime_error(path + ": bad coordinate line: " + line);
        S.entries.push_back({static_cast<Index>(i), static_cast<Index>(j), v});
        S.rows = std::max<Index>(S.rows, static_cast<Index>(i) + 1);
        S.cols = std::max<Index>(S.cols, static_cast<Index>(j) + 1);
    }
    S.canonicalize();
    return S;
}

void save_coordinate(const SparseMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const SparseMatrix::Entry& e : A.entries)
        out << e.row << ' ' << e.col << ' ' << format_real(e.value) << '\n';
}

std::vector<StreamUpdate> load_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<StreamUpdate> updates;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        long long x, y;
        double c;
        if (!(ss >> x >> y >> c)) throw std::runtime_error(path + ": bad stream line: " + line);
        updates.push_back({static_cast<Index>(x), static_cast<Index>(y), c});
    }
    return updates;
}

}  // namespace rlra
