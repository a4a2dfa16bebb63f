// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <algorithm>
#include <charconv>
#include <string>
#include <vector>

#include "starseg/evaluation.hpp"

namespace starseg {

/// One evaluated (image, level) pair. `chosen` flags the level a selection
/// step picked for that image; at most one row per image carries it.
struct ReportRow {
    std::string image_id;
    int level = 0;
    ConfusionCounts counts;
    Metrics metrics;
    bool chosen = false;
};

struct MetricsReport {
    std::vector<ReportRow> rows;
};

namespace detail {

inline void append_fixed6(std::string& out, double value) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
    out.append(buf, res.ptr);
}

}  // namespace detail

/// Serializes a report as UTF-8 CSV with LF line endings: a fixed header,
/// metrics at 6 decimal places, rows ordered by (image-id, level). Output is
/// byte-deterministic for a given report.
inline std::string write_metrics_csv(const MetricsReport& report) {
    std::vector<const ReportRow*> rows;
    rows.reserve(report.rows.size());
    for (const ReportRow& r : report.rows) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow* a, const ReportRow* b) {
        if (a->image_id != b->image_id) return a->image_id < b->image_id;
        return a->level < b->level;
    });

    std::string out = "image,level,tp,fp,fn,tn,precision,recall,accuracy,f1,chosen\n";
    for (const ReportRow* r : rows) {
        out += r->image_id;
        out += ',';
        out += std::to_string(r->level);
        out += ',';
        out += std::to_string(r->counts.tp);
        out += ',';
        out += std::to_string(r->counts.fp);
        out += ',';
        out += std::to_string(r->counts.fn);
        out += ',';
        out += std::to_string(r->counts.tn);
        out += ',';
        detail::append_fixed6(out, r->metrics.precision);
        out += ',';
        detail::append_fixed6(out, r->metrics.recall);
        out += ',';
        detail::append_fixed6(out, r->metrics.accuracy);
        out += ',';
        detail::append_fixed6(out, r->metrics.f1);
        out += ',';
        out += r->chosen ? "true" : "false";
        out += '\n';
    }
    return out;
}

}  // namespace starseg
