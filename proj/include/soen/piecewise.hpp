#pragma once

#include <functional>
#include <vector>

namespace soen {

/// A time function made of smooth pieces on [t_begin, t_end); zero elsewhere.
/// Integrators split at piece boundaries so each piece is seen as smooth.
struct PiecewiseFunction {
    struct Piece {
        double t_begin = 0.0;
        double t_end = 0.0;
        std::function<double(double)> fn;
    };
    std::vector<Piece> pieces;  ///< sorted, non-overlapping

    [[nodiscard]] double operator()(double t) const {
        for (const auto& p : pieces)
            if (t >= p.t_begin && t < p.t_end) return p.fn(t);
        return 0.0;
    }

    /// The piece covering t, or nullptr if t lies in a zero gap.
    [[nodiscard]] const Piece* piece_at(double t) const {
        for (const auto& p : pieces)
            if (t >= p.t_begin && t < p.t_end) return &p;
        return nullptr;
    }

    [[nodiscard]] std::vector<double> breakpoints() const {
        std::vector<double> out;
        for (const auto& p : pieces) {
            out.push_back(p.t_begin);
            out.push_back(p.t_end);
        }
        return out;
    }
};

/// Piecewise-constant schedule (e.g. channel resistance vs time); zero outside
/// the listed segments.
struct Schedule {
    struct Segment {
        double t_begin = 0.0;
        double t_end = 0.0;
        double value = 0.0;
    };
    std::vector<Segment> segments;  ///< sorted, non-overlapping

    [[nodiscard]] double operator()(double t) const {
        for (const auto& s : segments)
            if (t >= s.t_begin && t < s.t_end) return s.value;
        return 0.0;
    }

    [[nodiscard]] double total_duration(double value_threshold = 0.0) const {
        double sum = 0.0;
        for (const auto& s : segments)
            if (s.value > value_threshold) sum += s.t_end - s.t_begin;
        return sum;
    }
};

}  // namespace soen
