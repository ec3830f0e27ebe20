#include "vmat/synthgen.hpp"

#include "vmat/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace vmat {

double NormalRng::uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double NormalRng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

void SynthSpec::validate() const {
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "synthetic panel needs k >= 2");
    if (T < 2) throw Error(ErrorCode::InvalidArgument, "synthetic panel needs T >= 2");
    if (static_cast<std::size_t>(hedge_vector.size()) != k) {
        throw Error(ErrorCode::InvalidArgument, "hedge vector length differs from k");
    }
    if (!(hedge_vector.norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "zero hedge vector");
    if (!(std::abs(phi) < 1.0)) throw Error(ErrorCode::InvalidArgument, "|phi| must be < 1");
    if (!(sigma_spread >= 0.0) || !(sigma_trend >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sigmas must be >= 0");
    }
    if (!(initial_price > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial price must be > 0");
    for (const auto& f : extra_factors) {
        if (static_cast<std::size_t>(f.loading.size()) != k) {
            throw Error(ErrorCode::InvalidArgument, "factor loading length differs from k");
        }
        if (!(f.sigma >= 0.0) || !(std::abs(f.momentum) < 1.0) || f.lag < 1 ||
            !(f.reversion > -1.0 && f.reversion <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "factor needs sigma >= 0, |momentum| < 1, lag >= 1 and reversion in (-1, 1]");
        }
    }
}

namespace {

Eigen::VectorXd orthogonal_to(const Eigen::VectorXd& v, const Eigen::VectorXd& h) {
    return v - (v.dot(h) / h.squaredNorm()) * h;
}

}  // namespace

Eigen::VectorXd trend_loading(const SynthSpec& spec) {
    Eigen::VectorXd v = orthogonal_to(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(spec.k)),
                                      spec.hedge_vector);
    if (v.norm() < 1e-12) {
        v = orthogonal_to(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(spec.k), 0),
                          spec.hedge_vector);
    }
    return v;
}

std::vector<std::string> business_dates(const std::string& start, std::size_t count) {
    using namespace std::chrono;
    if (!is_iso_date(start)) throw Error(ErrorCode::InvalidArgument, "bad start date " + start);
    year_month_day ymd{year{std::stoi(start.substr(0, 4))},
                       month{static_cast<unsigned>(std::stoi(start.substr(5, 2)))},
                       day{static_cast<unsigned>(std::stoi(start.substr(8, 2)))}};
    sys_days day_point{ymd};
    std::vector<std::string> out;
    out.reserve(count);
    while (out.size() < count) {
        const weekday wd{day_point};
        if (wd != Saturday && wd != Sunday) {
            const year_month_day d{day_point};
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                          static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
            out.emplace_back(buf);
        }
        day_point += days{1};
    }
    return out;
}

PricePanel generate(const SynthSpec& spec) {
    spec.validate();
    const auto k = static_cast<Eigen::Index>(spec.k);
    const auto T = static_cast<Eigen::Index>(spec.T);
    const Eigen::VectorXd& h = spec.hedge_vector;
    const Eigen::VectorXd spread_loading = h / h.squaredNorm();
    const Eigen::VectorXd trend = trend_loading(spec);

    std::vector<Eigen::VectorXd> factor_loadings;
    for (const auto& f : spec.extra_factors) factor_loadings.push_back(orthogonal_to(f.loading, h));

    NormalRng rng(spec.seed);
    const double base = std::log(spec.initial_price);
    const double stationary_sd = spec.sigma_spread / std::sqrt(1.0 - spec.phi * spec.phi);

    double tau = 0.0;
    double spread = 0.0;
    std::vector<double> level(spec.extra_factors.size(), 0.0);
    std::vector<double> step(spec.extra_factors.size(), 0.0);
    std::vector<std::vector<double>> history(spec.extra_factors.size());

    Eigen::MatrixXd log_prices(T, k);
    for (Eigen::Index t = 0; t < T; ++t) {
        const double e_trend = rng.normal();
        const double e_spread = rng.normal();
        if (t == 0) {
            spread = stationary_sd * e_spread;
        } else {
            tau += spec.sigma_trend * e_trend;
            spread = spec.phi * spread + spec.sigma_spread * e_spread;
        }
        Eigen::VectorXd row = Eigen::VectorXd::Constant(k, base) + tau * trend + spread * spread_loading;
        for (std::size_t j = 0; j < spec.extra_factors.size(); ++j) {
            const auto& f = spec.extra_factors[j];
            const double e = rng.normal();
            if (t > 0) {
                step[j] = f.momentum * step[j] + f.sigma * e;
                const auto& past = history[j];
                const double lagged = past.size() >= f.lag ? past[past.size() - f.lag] : 0.0;
                level[j] = f.reversion * lagged + step[j];
            }
            history[j].push_back(level[j]);
            row += level[j] * factor_loadings[j];
        }
        log_prices.row(t) = row.transpose();
    }

    std::vector<std::string> tickers;
    for (std::size_t j = 0; j < spec.k; ++j) tickers.push_back("S" + std::to_string(j + 1));
    return PricePanel(business_dates(spec.start_date, spec.T), std::move(tickers),
                      log_prices.array().exp().matrix());
}

}  // namespace vmat
