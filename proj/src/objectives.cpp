#include "tunelab/objectives.hpp"

#include "tunelab/text.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace tunelab {

double ackley(const Eigen::Ref<const Eigen::ArrayXd>& x) {
    if (x.size() < 1) throw std::invalid_argument("ackley needs at least one variable");
    const double n = static_cast<double>(x.size());
    const double mean_sq = x.square().sum() / n;
    const double mean_cos = (2.0 * std::numbers::pi * x).cos().sum() / n;
    return -20.0 * std::exp(-0.2 * std::sqrt(mean_sq)) - std::exp(mean_cos) + 20.0 + std::numbers::e;
}

double eggholder2(double x, double y) {
    return -(y + 47.0) * std::sin(std::sqrt(std::abs(x / 2.0 + (y + 47.0)))) -
           x * std::sin(std::sqrt(std::abs(x - (y + 47.0))));
}

double eggholder_nd(const Eigen::Ref<const Eigen::ArrayXd>& x) {
    if (x.size() < 2) throw std::invalid_argument("eggholder needs at least two variables");
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) sum += eggholder2(x(i), x(i + 1));
    return sum;
}

ObjectiveSpec::ObjectiveSpec(SurrogateKind kind, DiscreteSpace space,
                             std::unordered_map<std::uint64_t, double> table)
    : kind_(kind), space_(std::move(space)), table_(std::move(table)) {}

ObjectiveSpec ObjectiveSpec::ackley_surrogate(DiscreteSpace space) {
    return ObjectiveSpec(SurrogateKind::ackley, std::move(space), {});
}

ObjectiveSpec ObjectiveSpec::eggholder_surrogate(DiscreteSpace space) {
    if (space.n_vars() < 2)
        throw std::invalid_argument("eggholder surrogate needs at least two variables");
    return ObjectiveSpec(SurrogateKind::eggholder, std::move(space), {});
}

ObjectiveSpec ObjectiveSpec::table_surrogate(DiscreteSpace space,
                                             std::unordered_map<std::uint64_t, double> table) {
    const std::uint64_t card = cardinality(space);
    for (const auto& [rank, fitness] : table) {
        if (rank >= card) throw std::invalid_argument("table key outside the space");
        if (!std::isfinite(fitness)) throw std::invalid_argument("table fitness must be finite");
    }
    return ObjectiveSpec(SurrogateKind::table, std::move(space), std::move(table));
}

void ObjectiveSpec::set_penalty(PenaltyRule rule) {
    if (!(rule.magnitude > 0.0)) throw std::invalid_argument("penalty magnitude must be positive");
    const std::uint64_t card = cardinality(space_);
    for (std::uint64_t rank : rule.infeasible) {
        if (rank >= card) throw std::invalid_argument("penalty key outside the space");
    }
    penalty_ = std::move(rule);
}

namespace {

std::string format_index_vector(const IndexVector& iv) {
    std::string s = "(";
    for (Eigen::Index j = 0; j < iv.size(); ++j) {
        if (j > 0) s += ", ";
        s += std::to_string(iv(j));
    }
    s += ")";
    return s;
}

double raw_fitness(const ObjectiveSpec& spec, const IndexVector& iv, std::uint64_t rank,
                   Eigen::ArrayXd& value_buf) {
    switch (spec.kind()) {
        case SurrogateKind::ackley:
            decode_into(iv, spec.space(), value_buf);
            return ackley(value_buf);
        case SurrogateKind::eggholder:
            decode_into(iv, spec.space(), value_buf);
            return eggholder_nd(value_buf);
        case SurrogateKind::table: {
            const auto it = spec.table().find(rank);
            if (it == spec.table().end())
                throw std::invalid_argument("fitness table has no entry for " +
                                            format_index_vector(iv));
            return it->second;
        }
    }
    throw std::logic_error("unknown surrogate kind");
}

}  // namespace

Evaluation evaluate(const ObjectiveSpec& spec, const IndexVector& iv) {
    if (iv.size() != spec.space().n_vars())
        throw std::invalid_argument("index vector has wrong dimension");
    const std::uint64_t rank = linear_index(iv, spec.space());  // also range-checks
    Eigen::ArrayXd buf;
    Evaluation ev;
    ev.fitness = raw_fitness(spec, iv, rank, buf);
    if (spec.penalty() && spec.penalty()->infeasible.contains(rank)) {
        ev.fitness += spec.penalty()->magnitude;
        ev.feasible = false;
    }
    return ev;
}

double fitness_of(const ObjectiveSpec& spec, const Genotype& g, EvalScratch& scratch) {
    snap_into(g, spec.space(), scratch.indices);
    std::uint64_t rank = 0;
    if (spec.kind() == SurrogateKind::table || spec.penalty()) {
        for (int j = 0; j < spec.space().n_vars(); ++j)
            rank = rank * static_cast<std::uint64_t>(spec.space().grid(j).count()) +
                   static_cast<std::uint64_t>(scratch.indices(j));
    }
    double fitness = raw_fitness(spec, scratch.indices, rank, scratch.values);
    if (spec.penalty() && spec.penalty()->infeasible.contains(rank))
        fitness += spec.penalty()->magnitude;
    return fitness;
}

namespace {

struct TableRow {
    std::vector<int> indices;
    double fitness = 0.0;
    std::size_t line = 0;
};

[[noreturn]] void csv_error(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
    throw std::invalid_argument(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::vector<TableRow> parse_table_rows(const std::filesystem::path& path, int expected_vars) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open table file " + path.string());

    std::string line;
    std::size_t line_no = 0;
    int n_vars = expected_vars;

    if (!std::getline(in, line)) csv_error(path, 1, "missing header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_fields(line);
    if (header.size() < 2 || header.back() != "fitness")
        csv_error(path, line_no, "header must be i1,...,ik,fitness");
    const int header_vars = static_cast<int>(header.size()) - 1;
    for (int j = 0; j < header_vars; ++j) {
        if (header[static_cast<std::size_t>(j)] != "i" + std::to_string(j + 1))
            csv_error(path, line_no, "header must be i1,...,ik,fitness");
    }
    if (n_vars < 0)
        n_vars = header_vars;
    else if (header_vars != n_vars)
        csv_error(path, line_no,
                  "header lists " + std::to_string(header_vars) + " variables, expected " +
                      std::to_string(n_vars));

    std::vector<TableRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            // allow a single trailing blank line
            std::string rest;
            if (std::getline(in, rest)) csv_error(path, line_no, "empty row");
            break;
        }
        const std::vector<std::string> fields = split_fields(line);
        if (static_cast<int>(fields.size()) != n_vars + 1)
            csv_error(path, line_no,
                      "expected " + std::to_string(n_vars + 1) + " fields, got " +
                          std::to_string(fields.size()));
        TableRow row;
        row.line = line_no;
        row.indices.resize(static_cast<std::size_t>(n_vars));
        for (int j = 0; j < n_vars; ++j) {
            const std::string& f = fields[static_cast<std::size_t>(j)];
            int value = 0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
            if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
                csv_error(path, line_no, "malformed index '" + f + "'");
            if (value < 0) csv_error(path, line_no, "negative index " + std::to_string(value));
            row.indices[static_cast<std::size_t>(j)] = value;
        }
        const std::string& f = fields.back();
        const auto res = std::from_chars(f.data(), f.data() + f.size(), row.fitness);
        if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || !std::isfinite(row.fitness))
            csv_error(path, line_no, "malformed fitness '" + f + "'");
        rows.push_back(std::move(row));
    }
    return rows;
}

ObjectiveSpec build_table_spec(const std::filesystem::path& path, DiscreteSpace space,
                               const std::vector<TableRow>& rows) {
    std::unordered_map<std::uint64_t, double> table;
    std::unordered_map<std::uint64_t, std::size_t> first_line;
    table.reserve(rows.size());
    IndexVector iv(space.n_vars());
    for (const TableRow& row : rows) {
        for (int j = 0; j < space.n_vars(); ++j) {
            const int idx = row.indices[static_cast<std::size_t>(j)];
            if (idx >= space.grid(j).count())
                csv_error(path, row.line,
                          "index " + std::to_string(idx) + " out of range for variable i" +
                              std::to_string(j + 1) + " (grid size " +
                              std::to_string(space.grid(j).count()) + ")");
            iv(j) = idx;
        }
        const std::uint64_t rank = linear_index(iv, space);
        const auto [it, inserted] = first_line.emplace(rank, row.line);
        if (!inserted)
            csv_error(path, row.line,
                      "duplicate index vector " + format_index_vector(iv) + " (first at line " +
                          std::to_string(it->second) + ")");
        table.emplace(rank, row.fitness);
    }
    return ObjectiveSpec::table_surrogate(std::move(space), std::move(table));
}

}  // namespace

ObjectiveSpec load_table(const std::filesystem::path& path, const DiscreteSpace& space) {
    return build_table_spec(path, space, parse_table_rows(path, space.n_vars()));
}

ObjectiveSpec load_table(const std::filesystem::path& path) {
    const std::vector<TableRow> rows = parse_table_rows(path, -1);
    if (rows.empty()) throw std::invalid_argument(path.string() + ": table has no rows");
    const std::size_t n_vars = rows.front().indices.size();
    std::vector<int> counts(n_vars, 0);
    for (const TableRow& row : rows) {
        for (std::size_t j = 0; j < n_vars; ++j)
            counts[j] = std::max(counts[j], row.indices[j] + 1);
    }
    std::vector<ValueGrid> grids;
    grids.reserve(n_vars);
    for (std::size_t j = 0; j < n_vars; ++j) {
        if (counts[j] < 2)
            throw std::invalid_argument(path.string() + ": variable i" + std::to_string(j + 1) +
                                        " never exceeds index 0; grid size cannot be inferred");
        grids.push_back(ValueGrid::linear(0.0, static_cast<double>(counts[j] - 1), counts[j]));
    }
    return build_table_spec(path, DiscreteSpace(std::move(grids)), rows);
}

void save_table(const ObjectiveSpec& spec, const std::filesystem::path& path) {
    if (spec.kind() != SurrogateKind::table)
        throw std::invalid_argument("save_table needs a table surrogate");
    std::vector<std::uint64_t> ranks;
    ranks.reserve(spec.table().size());
    for (const auto& [rank, fitness] : spec.table()) ranks.push_back(rank);
    std::sort(ranks.begin(), ranks.end());

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write table file " + path.string());
    for (int j = 0; j < spec.space().n_vars(); ++j) out << 'i' << (j + 1) << ',';
    out << "fitness\n";
    for (std::uint64_t rank : ranks) {
        const IndexVector iv = index_from_linear(rank, spec.space());
        for (Eigen::Index j = 0; j < iv.size(); ++j) out << iv(j) << ',';
        out << format_double(spec.table().at(rank)) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

OracleResult brute_force_optimum(const ObjectiveSpec& spec, std::uint64_t limit) {
    const std::uint64_t card = cardinality(spec.space());
    if (card > limit)
        throw std::invalid_argument("space has " + std::to_string(card) +
                                    " solutions, above the exhaustive-scan limit of " +
                                    std::to_string(limit));
    const auto t0 = std::chrono::steady_clock::now();
    IndexVector iv = IndexVector::Zero(spec.space().n_vars());
    Eigen::ArrayXd buf;
    OracleResult best;
    best.cardinality = card;
    std::uint64_t rank = 0;
    bool more = true;
    while (more) {
        const double f = [&] {
            double raw = raw_fitness(spec, iv, rank, buf);
            if (spec.penalty() && spec.penalty()->infeasible.contains(rank))
                raw += spec.penalty()->magnitude;
            return raw;
        }();
        if (rank == 0 || f < best.minimum) {
            best.minimum = f;
            best.minimizer = iv;
        }
        more = next_index(iv, spec.space());
        ++rank;
    }
    best.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return best;
}

}  // namespace tunelab
