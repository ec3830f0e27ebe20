#pragma once

// Hand-built backtest scenarios shared by the unit and acceptance suites.

#include "vmat/backtester.hpp"
#include "vmat/market_data.hpp"

#include <cmath>
#include <vector>

namespace vmat::testing {

/// Ten evaluation days, horizon 3, three scripted trades:
///   day 2: long, profit +0.01 on the first day (controlled)
///   day 5: short, never profitable, forced exit at -0.02
///   day 8: short, profit +0.01 on the second day (controlled)
inline std::vector<TradeDecision> scripted_ten_days() {
    std::vector<TradeDecision> days(10);
    for (std::size_t i = 0; i < days.size(); ++i) days[i].time_index = 100 + i;

    days[2].delta = 1;
    settle(days[2], std::vector<double>{0.01, 0.02, 0.0});

    days[5].delta = -1;
    settle(days[5], std::vector<double>{0.005, 0.03, 0.02});

    days[8].delta = -1;
    settle(days[8], std::vector<double>{0.0, -0.01, -0.03});
    return days;
}

struct ScriptedExpectation {
    double pl_mean = 0.0;
    double pl_se = std::sqrt(0.0006 / 9.0) / std::sqrt(10.0);
    double signal_rate = 3.0 / 10.0;
    double control_rate = 2.0 / 3.0;
    double profit_rate = 2.0 / 10.0;
    double max_drawdown = -0.02;
};

/// Two assets over 10 rows, equal weights. A short entered at row 7 sees the
/// portfolio rise on row 8 and fall on row 9.
inline PricePanel two_asset_fixture() {
    Eigen::MatrixXd prices(10, 2);
    prices << 100, 100,  //
        101, 99,         //
        102, 101,        //
        100, 100,        //
        99, 103,         //
        101, 102,        //
        100, 101,        //
        100, 100,        //
        101, 100,        //
        99, 98;
    return PricePanel({"2021-01-04", "2021-01-05", "2021-01-06", "2021-01-07", "2021-01-08",
                       "2021-01-11", "2021-01-12", "2021-01-13", "2021-01-14", "2021-01-15"},
                      {"A", "B"}, prices);
}

}  // namespace vmat::testing
