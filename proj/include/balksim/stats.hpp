#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace balksim {

struct MeanSem {
    double mean = 0.0;
    double sem = 0.0;
    int n = 0;
};

/// Mean plus standard error of the mean (sample standard deviation with
/// the n-1 denominator, divided by sqrt(n)). A single sample reports
/// sem = 0; an empty sequence is an error.
inline MeanSem summarize(const std::vector<double>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("summarize: no samples");
    }
    MeanSem out;
    out.n = static_cast<int>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    out.mean = sum / static_cast<double>(out.n);
    if (out.n == 1) {
        out.sem = 0.0;
        return out;
    }
    double ss = 0.0;
    for (double x : samples) {
        const double d = x - out.mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(out.n - 1));
    out.sem = sd / std::sqrt(static_cast<double>(out.n));
    return out;
}

/// Trailing moving average: element i averages the last min(i+1, window)
/// values. Keeps the output the same length as the input so episode
/// indices line up with the raw curve.
inline std::vector<double> moving_average(const std::vector<double>& values,
                                          int window) {
    if (window < 1) {
        throw std::invalid_argument("moving_average: window must be >= 1");
    }
    std::vector<double> out(values.size());
    double running = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        running += values[i];
        const std::size_t w = static_cast<std::size_t>(window);
        if (i >= w) {
            running -= values[i - w];
            out[i] = running / static_cast<double>(window);
        } else {
            out[i] = running / static_cast<double>(i + 1);
        }
    }
    return out;
}

/// Mean of values[first, first+count).
inline double mean_range(const std::vector<double>& values, std::size_t first,
                         std::size_t count) {
    if (count == 0 || first + count > values.size()) {
        throw std::invalid_argument("mean_range: bad range");
    }
    double sum = 0.0;
    for (std::size_t i = first; i < first + count; ++i) sum += values[i];
    return sum / static_cast<double>(count);
}

}  // namespace balksim
