#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace vmat {

/**
 * Aligned daily price history: T timestamps by k assets.
 *
 * Immutable after construction. Prices are validated strictly positive and
 * timestamps strictly increasing; log prices are cached so formation windows
 * are cheap to extract from concurrent backtest workers.
 */
class PricePanel {
public:
    PricePanel(std::vector<std::string> timestamps, std::vector<std::string> tickers,
               Eigen::MatrixXd prices);

    [[nodiscard]] std::size_t rows() const noexcept { return timestamps_.size(); }
    [[nodiscard]] std::size_t assets() const noexcept { return tickers_.size(); }

    [[nodiscard]] const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }
    [[nodiscard]] const std::vector<std::string>& tickers() const noexcept { return tickers_; }
    [[nodiscard]] const Eigen::MatrixXd& prices() const noexcept { return prices_; }
    [[nodiscard]] const Eigen::MatrixXd& log_prices() const noexcept { return log_prices_; }

    /// Rows [0, end) as a new panel. Used to audit causality.
    [[nodiscard]] PricePanel truncated(std::size_t end) const;

    /// Same data with columns reordered: column j of the result is column order[j] here.
    [[nodiscard]] PricePanel permuted(const std::vector<std::size_t>& order) const;

private:
    std::vector<std::string> timestamps_;
    std::vector<std::string> tickers_;
    Eigen::MatrixXd prices_;
    Eigen::MatrixXd log_prices_;
};

/// The last length+1 rows ending at end_index (inclusive).
struct FormationWindow {
    const PricePanel* panel = nullptr;
    std::size_t end_index = 0;
    std::size_t length = 0;
};

/// (length+1) x k matrix of natural-log prices; row i is panel row end_index - length + i.
[[nodiscard]] Eigen::MatrixXd log_window(const FormationWindow& window);

struct CsvSchema {
    std::string date_column = "date";
    /// Tickers to keep, in output order. Empty keeps every non-date column in header order.
    std::vector<std::string> tickers;
};

/// Wide CSV `date,T1,...,Tk` with ISO-8601 dates. Rows with any missing cell
/// (empty, "NA", "NaN", "null") are dropped.
[[nodiscard]] PricePanel load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Loads several wide CSVs and joins their columns on the intersection of dates.
[[nodiscard]] PricePanel load_csv(const std::vector<std::filesystem::path>& paths,
                                  const CsvSchema& schema = {});

void write_csv(const PricePanel& panel, const std::filesystem::path& path);

/// True for YYYY-MM-DD strings naming a real calendar date.
[[nodiscard]] bool is_iso_date(const std::string& text);

}  // namespace vmat
