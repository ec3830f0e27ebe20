#include "vmat/market_data.hpp"

#include "vmat/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace vmat {

PricePanel::PricePanel(std::vector<std::string> timestamps, std::vector<std::string> tickers,
                       Eigen::MatrixXd prices)
    : timestamps_(std::move(timestamps)), tickers_(std::move(tickers)), prices_(std::move(prices)) {
    if (static_cast<std::size_t>(prices_.rows()) != timestamps_.size() ||
        static_cast<std::size_t>(prices_.cols()) != tickers_.size()) {
        throw Error(ErrorCode::InvalidArgument, "price matrix shape does not match labels");
    }
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        if (!(timestamps_[i - 1] < timestamps_[i])) {
            throw Error(ErrorCode::InvalidArgument,
                        "timestamps not strictly increasing at " + timestamps_[i]);
        }
    }
    for (Eigen::Index i = 0; i < prices_.rows(); ++i) {
        for (Eigen::Index j = 0; j < prices_.cols(); ++j) {
            const double v = prices_(i, j);
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteInput, "non-finite price on " + timestamps_[i]);
            }
            if (v <= 0.0) {
                throw Error(ErrorCode::NonPositivePrice,
                            "price " + std::to_string(v) + " for " + tickers_[j] + " on " +
                                timestamps_[i]);
            }
        }
    }
    log_prices_ = prices_.array().log().matrix();
}

PricePanel PricePanel::truncated(std::size_t end) const {
    end = std::min(end, rows());
    std::vector<std::string> ts(timestamps_.begin(), timestamps_.begin() + end);
    return PricePanel(std::move(ts), tickers_, prices_.topRows(static_cast<Eigen::Index>(end)));
}

PricePanel PricePanel::permuted(const std::vector<std::size_t>& order) const {
    if (order.size() != assets()) {
        throw Error(ErrorCode::InvalidArgument, "permutation size mismatch");
    }
    std::vector<std::string> tickers;
    Eigen::MatrixXd prices(prices_.rows(), prices_.cols());
    for (std::size_t j = 0; j < order.size(); ++j) {
        if (order[j] >= assets()) {
            throw Error(ErrorCode::InvalidArgument, "permutation index out of range");
        }
        tickers.push_back(tickers_[order[j]]);
        prices.col(static_cast<Eigen::Index>(j)) = prices_.col(static_cast<Eigen::Index>(order[j]));
    }
    return PricePanel(timestamps_, std::move(tickers), std::move(prices));
}

Eigen::MatrixXd log_window(const FormationWindow& window) {
    if (window.panel == nullptr) {
        throw Error(ErrorCode::InvalidArgument, "formation window has no panel");
    }
    if (window.end_index >= window.panel->rows() || window.length > window.end_index) {
        throw Error(ErrorCode::OutOfRange, "formation window [" +
                                               std::to_string(window.end_index) + " - " +
                                               std::to_string(window.length) + ", " +
                                               std::to_string(window.end_index) +
                                               "] outside panel");
    }
    const auto start = static_cast<Eigen::Index>(window.end_index - window.length);
    return window.panel->log_prices().middleRows(start, static_cast<Eigen::Index>(window.length + 1));
}

bool is_iso_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    const int y = std::stoi(text.substr(0, 4));
    const unsigned m = static_cast<unsigned>(std::stoi(text.substr(5, 2)));
    const unsigned d = static_cast<unsigned>(std::stoi(text.substr(8, 2)));
    return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                       std::chrono::day{d}}
        .ok();
}

namespace {

struct RawTable {
    std::vector<std::string> columns;
    std::map<std::string, std::vector<std::optional<double>>> rows;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null" ||
           cell == "N/A";
}

RawTable read_table(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, path.string() + ": empty file");
    }
    const auto header = split(line);
    const auto date_it = std::find(header.begin(), header.end(), schema.date_column);
    const std::size_t date_col =
        date_it == header.end() ? 0 : static_cast<std::size_t>(date_it - header.begin());

    std::vector<std::size_t> keep;
    RawTable table;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == date_col) continue;
        if (!schema.tickers.empty() &&
            std::find(schema.tickers.begin(), schema.tickers.end(), header[c]) ==
                schema.tickers.end()) {
            continue;
        }
        keep.push_back(c);
        table.columns.push_back(header[c]);
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) +
                                                   ": expected " + std::to_string(header.size()) +
                                                   " fields, found " +
                                                   std::to_string(cells.size()));
        }
        const std::string& date = cells[date_col];
        if (!is_iso_date(date)) {
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(line_no) + ": bad date '" + date + "'");
        }
        std::vector<std::optional<double>> values;
        values.reserve(keep.size());
        for (std::size_t c : keep) {
            const std::string& cell = cells[c];
            if (is_missing(cell)) {
                values.emplace_back();
                continue;
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) +
                                                       ": bad number '" + cell + "'");
            }
            if (v <= 0.0) {
                throw Error(ErrorCode::NonPositivePrice, path.string() + ":" +
                                                             std::to_string(line_no) + ": price " +
                                                             cell + " for " + header[c]);
            }
            values.emplace_back(v);
        }
        if (!table.rows.emplace(date, std::move(values)).second) {
            throw Error(ErrorCode::ParseError, path.string() + ": duplicate date " + date);
        }
    }
    return table;
}

}  // namespace

PricePanel load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    return load_csv(std::vector<std::filesystem::path>{path}, schema);
}

PricePanel load_csv(const std::vector<std::filesystem::path>& paths, const CsvSchema& schema) {
    if (paths.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no input files");
    }
    std::vector<RawTable> tables;
    std::vector<std::string> tickers;
    for (const auto& path : paths) {
        tables.push_back(read_table(path, schema));
        for (const auto& name : tables.back().columns) {
            if (std::find(tickers.begin(), tickers.end(), name) != tickers.end()) {
                throw Error(ErrorCode::ParseError, "ticker " + name + " appears twice");
            }
            tickers.push_back(name);
        }
    }

    // Requested order, when given, overrides file order.
    std::vector<std::size_t> order(tickers.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    if (!schema.tickers.empty()) {
        order.clear();
        for (const auto& want : schema.tickers) {
            const auto it = std::find(tickers.begin(), tickers.end(), want);
            if (it == tickers.end()) {
                throw Error(ErrorCode::ParseError, "ticker " + want + " not found");
            }
            order.push_back(static_cast<std::size_t>(it - tickers.begin()));
        }
    }
    if (order.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "need at least 2 tickers, found " +
                                                    std::to_string(order.size()));
    }

    std::vector<std::string> dates;
    std::vector<std::vector<double>> rows;
    for (const auto& [date, first_values] : tables.front().rows) {
        std::vector<double> row;
        bool complete = true;
        for (const auto& table : tables) {
            const auto it = table.rows.find(date);
            if (it == table.rows.end()) {
                complete = false;
                break;
            }
            for (const auto& cell : it->second) {
                if (!cell) {
                    complete = false;
                    break;
                }
                row.push_back(*cell);
            }
            if (!complete) break;
        }
        if (complete) {
            dates.push_back(date);
            rows.push_back(std::move(row));
        }
    }
    if (dates.empty()) {
        throw Error(ErrorCode::InsufficientData, "no dates with complete prices");
    }

    Eigen::MatrixXd prices(static_cast<Eigen::Index>(dates.size()),
                           static_cast<Eigen::Index>(order.size()));
    std::vector<std::string> out_tickers;
    for (std::size_t j = 0; j < order.size(); ++j) {
        out_tickers.push_back(tickers[order[j]]);
        for (std::size_t i = 0; i < dates.size(); ++i) {
            prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][order[j]];
        }
    }
    return PricePanel(std::move(dates), std::move(out_tickers), std::move(prices));
}

void write_csv(const PricePanel& panel, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out << "date";
    for (const auto& t : panel.tickers()) out << ',' << t;
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < panel.rows(); ++i) {
        out << panel.timestamps()[i];
        for (std::size_t j = 0; j < panel.assets(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g",
                          panel.prices()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace vmat
